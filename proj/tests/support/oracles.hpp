/// Dense reference computations for tests. Everything here goes through
/// Eigen so the checks stay independent of the sparse kernels under test.

#ifndef MATCHAMG_TESTS_ORACLES_HPP
#define MATCHAMG_TESTS_ORACLES_HPP

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "matchamg/csr.hpp"

namespace matchamg::testing {

inline Eigen::MatrixXd to_dense(const CsrMatrix& A) {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(A.nrows, A.ncols);
    for (index_t i = 0; i < A.nrows; ++i)
        for (index_t k = A.row_begin(i); k < A.row_end(i); ++k)
            D(i, A.col_idx[k]) += A.values[k];
    return D;
}

inline Eigen::VectorXd to_eigen(std::span<const double> x) {
    return Eigen::Map<const Eigen::VectorXd>(x.data(),
                                             static_cast<Eigen::Index>(x.size()));
}

inline std::vector<double> from_eigen(const Eigen::VectorXd& x) {
    return std::vector<double>(x.data(), x.data() + x.size());
}

inline bool is_spd(const CsrMatrix& A) {
    const Eigen::MatrixXd D = to_dense(A);
    if ((D - D.transpose()).cwiseAbs().maxCoeff() > 1e-12 * D.cwiseAbs().maxCoeff())
        return false;
    Eigen::LLT<Eigen::MatrixXd> llt(D);
    return llt.info() == Eigen::Success;
}

inline double smallest_eigenvalue(const CsrMatrix& A) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_dense(A));
    return es.eigenvalues().minCoeff();
}

/// rho(I - D^{-1} A) for symmetric A and positive diagonal d, via the
/// similarity transform D^{-1/2} A D^{-1/2}.
inline double jacobi_spectral_radius(const CsrMatrix& A,
                                     std::span<const double> d) {
    const Eigen::Index n = A.nrows;
    Eigen::VectorXd dinv_sqrt(n);
    for (Eigen::Index i = 0; i < n; ++i) dinv_sqrt(i) = 1.0 / std::sqrt(d[i]);
    const Eigen::MatrixXd S =
        dinv_sqrt.asDiagonal() * to_dense(A) * dinv_sqrt.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    double rho = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        rho = std::max(rho, std::abs(1.0 - es.eigenvalues()(i)));
    return rho;
}

inline std::vector<double> dense_solve(const CsrMatrix& A,
                                       std::span<const double> b) {
    const Eigen::VectorXd x = to_dense(A).ldlt().solve(to_eigen(b));
    return from_eigen(x);
}

inline double a_norm(const CsrMatrix& A, std::span<const double> e) {
    const Eigen::VectorXd v = to_eigen(e);
    return std::sqrt(v.dot(to_dense(A) * v));
}

/// max_ij |X_ij - Y_ij| / max_ij |Y_ij| on dense forms.
inline double rel_diff(const CsrMatrix& X, const CsrMatrix& Y) {
    const Eigen::MatrixXd DX = to_dense(X);
    const Eigen::MatrixXd DY = to_dense(Y);
    const double scale = DY.cwiseAbs().maxCoeff();
    const double diff = (DX - DY).cwiseAbs().maxCoeff();
    return scale > 0.0 ? diff / scale : diff;
}

inline double rel_diff(std::span<const double> x, std::span<const double> y) {
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        diff = std::max(diff, std::abs(x[i] - y[i]));
        scale = std::max(scale, std::abs(y[i]));
    }
    return scale > 0.0 ? diff / scale : diff;
}

} // namespace matchamg::testing

#endif
