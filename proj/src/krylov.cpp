#include "matchamg/krylov.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "matchamg/kernels.hpp"

namespace matchamg {

void SolveConfig::validate() const {
    if (!(rtol > 0.0))
        throw std::invalid_argument("SolveConfig: rtol must be > 0");
    if (itmax < 1)
        throw std::invalid_argument("SolveConfig: itmax must be >= 1");
}

BreakdownError::BreakdownError(index_t iteration, const std::string& what)
    : std::runtime_error("pcg breakdown at iteration " +
                         std::to_string(iteration) + ": " + what),
      iteration_(iteration) {}

namespace {

constexpr index_t kAuditInterval = 50;

void audit_residual(const CsrMatrix& A, std::span<const double> u,
                    std::span<const double> b, std::span<const double> r,
                    double norm_b, std::vector<double>& scratch,
                    SolveReport& report) {
    spmv_into(A, u, scratch);
    const index_t n = A.nrows;
#pragma omp parallel for schedule(static)
    for (index_t i = 0; i < n; ++i) scratch[i] = r[i] - (b[i] - scratch[i]);
    const double rel = norm2(scratch) / norm_b;
    ++report.audit_checks;
    report.audit_max_rel = std::max(report.audit_max_rel, rel);
    if (rel > 1e-10) ++report.audit_failures;
}

} // namespace

std::pair<std::vector<double>, SolveReport>
pcg_solve(const CsrMatrix& A, const PrecondFn& B, std::span<const double> b,
          std::span<const double> u0, const SolveConfig& cfg) {
    cfg.validate();
    const index_t n = A.nrows;
    if (A.ncols != n)
        throw std::invalid_argument("pcg_solve: matrix is not square");
    if (static_cast<index_t>(b.size()) != n ||
        static_cast<index_t>(u0.size()) != n)
        throw std::invalid_argument("pcg_solve: dimension mismatch");

    const auto t_start = std::chrono::steady_clock::now();
    SolveReport report;
    const double norm_b = norm2(b);
    auto finish = [&](std::vector<double> u) {
        report.solve_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t_start)
                              .count();
        if (norm_b > 0.0 && !report.residual_history.empty())
            report.final_relres = report.residual_history.back() / norm_b;
        return std::make_pair(std::move(u), std::move(report));
    };

    if (norm_b == 0.0) {
        report.converged = true;
        report.residual_history = {0.0};
        return finish(std::vector<double>(n, 0.0));
    }

    const LaneGroupPolicy policy = LaneGroupPolicy::for_matrix(A);
    std::vector<double> u(u0.begin(), u0.end());
    std::vector<double> r(n), w(n), d(n), v(n), q(n);

    auto apply_precond = [&](std::span<const double> in, std::span<double> out) {
        if (B)
            B(in, out);
        else
            std::copy(in.begin(), in.end(), out.begin());
    };

    // r_0 = b - A u_0
    spmv_into(A, u, r, policy);
#pragma omp parallel for schedule(static)
    for (index_t i = 0; i < n; ++i) r[i] = b[i] - r[i];

    report.residual_history.push_back(norm2(r));
    auto relres = [&] { return report.residual_history.back() / norm_b; };
    if (relres() <= cfg.rtol) {
        report.converged = true;
        return finish(std::move(u));
    }

    // w_0 = d_0 = B(r_0), v_0 = q_0 = A w_0
    apply_precond(r, w);
    d = w;
    spmv_into(A, w, v, policy);
    q = v;
    double alpha = dot(w, r);
    double rho = dot(w, v);
    if (!std::isfinite(alpha) || !std::isfinite(rho) || rho <= 0.0)
        throw BreakdownError(0, "rho_0 = " + std::to_string(rho));

    double step = alpha / rho;
    axpy(u, step, d);
    axpy(r, -step, q);
    report.iterations = 1;
    report.residual_history.push_back(norm2(r));

    while (relres() > cfg.rtol && report.iterations < cfg.itmax) {
        apply_precond(r, w);
        spmv_into(A, w, v, policy);

        const TripleDot s3 = fused_triple_dot(w, r, v, q);
        alpha = s3.wr;
        const double rho_next = s3.wv - s3.wq * s3.wq / rho;
        if (!std::isfinite(s3.wr) || !std::isfinite(s3.wv) ||
            !std::isfinite(s3.wq) || !std::isfinite(rho_next) ||
            rho_next <= 0.0)
            throw BreakdownError(report.iterations,
                                 "rho = " + std::to_string(rho_next));

        const double t = s3.wq / rho;
        step = alpha / rho_next;
        // d_i lands in w's buffer, q_i in v's; swap restores the names
        fused_axpy_pair(w, u, d, -t, step);
        std::swap(d, w);
        fused_axpy_pair(v, r, q, -t, -step);
        std::swap(q, v);
        rho = rho_next;

        ++report.iterations;
        report.residual_history.push_back(norm2(r));
        if (report.iterations % kAuditInterval == 0)
            audit_residual(A, u, b, r, norm_b, w, report);
    }

    report.converged = relres() <= cfg.rtol;
    return finish(std::move(u));
}

std::pair<std::vector<double>, SolveReport>
pcg_solve(const CsrMatrix& A, const PrecondFn& B, std::span<const double> b,
          const SolveConfig& cfg) {
    return pcg_solve(A, B, b, std::vector<double>(A.nrows, 0.0), cfg);
}

} // namespace matchamg
