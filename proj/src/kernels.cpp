#include "matchamg/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace matchamg {

LaneGroupPolicy LaneGroupPolicy::for_matrix(const CsrMatrix& A) {
    if (A.nrows > 0 && A.nnz() == A.nrows) {
        bool all_single = true;
        for (index_t i = 0; i < A.nrows && all_single; ++i)
            all_single = A.row_nnz(i) == 1;
        if (all_single) return LaneGroupPolicy{1};
    }
    const double mean =
        A.nrows > 0 ? static_cast<double>(A.nnz()) / static_cast<double>(A.nrows)
                    : 0.0;
    for (int g : {2, 4, 8, 16, 32})
        if (static_cast<double>(g) >= mean) return LaneGroupPolicy{g};
    return LaneGroupPolicy{kMaxGroup};
}

LaneGroupPolicy LaneGroupPolicy::fixed(int group_size) {
    for (int g : kAdmissible)
        if (g == group_size) return LaneGroupPolicy{group_size};
    throw std::invalid_argument("LaneGroupPolicy: group size " +
                                std::to_string(group_size) +
                                " not in {1,2,4,8,16,32}");
}

namespace {

template <int G>
void spmv_lanes(const CsrMatrix& A, const double* x, double* y) {
#pragma omp parallel for schedule(static)
    for (index_t i = 0; i < A.nrows; ++i) {
        const index_t lo = A.row_ptr[i];
        const index_t hi = A.row_ptr[i + 1];
        if constexpr (G == 1) {
            double acc = 0.0;
            for (index_t k = lo; k < hi; ++k)
                acc += A.values[k] * x[A.col_idx[k]];
            y[i] = acc;
        } else {
            double acc[G];
            for (int l = 0; l < G; ++l) {
                double s = 0.0;
                for (index_t k = lo + l; k < hi; k += G)
                    s += A.values[k] * x[A.col_idx[k]];
                acc[l] = s;
            }
            // lane combine mirrors a shuffle-down tree, fixed order
            for (int off = G / 2; off > 0; off /= 2)
                for (int l = 0; l < off; ++l) acc[l] += acc[l + off];
            y[i] = acc[0];
        }
    }
}

} // namespace

void spmv_into(const CsrMatrix& A, std::span<const double> x,
               std::span<double> y, LaneGroupPolicy policy) {
    if (static_cast<index_t>(x.size()) != A.ncols)
        throw std::invalid_argument(
            "spmv: x has " + std::to_string(x.size()) + " entries, A has " +
            std::to_string(A.ncols) + " columns");
    if (static_cast<index_t>(y.size()) != A.nrows)
        throw std::invalid_argument("spmv: output size mismatch");
    switch (policy.group_size) {
        case 1: spmv_lanes<1>(A, x.data(), y.data()); break;
        case 2: spmv_lanes<2>(A, x.data(), y.data()); break;
        case 4: spmv_lanes<4>(A, x.data(), y.data()); break;
        case 8: spmv_lanes<8>(A, x.data(), y.data()); break;
        case 16: spmv_lanes<16>(A, x.data(), y.data()); break;
        case 32: spmv_lanes<32>(A, x.data(), y.data()); break;
        default:
            throw std::invalid_argument("spmv: invalid lane group size " +
                                        std::to_string(policy.group_size));
    }
}

std::vector<double> spmv(const CsrMatrix& A, std::span<const double> x,
                         LaneGroupPolicy policy) {
    std::vector<double> y(A.nrows);
    spmv_into(A, x, y, policy);
    return y;
}

std::vector<double> spmv(const CsrMatrix& A, std::span<const double> x) {
    return spmv(A, x, LaneGroupPolicy::for_matrix(A));
}

void spmv_into(const CsrMatrix& A, std::span<const double> x,
               std::span<double> y) {
    spmv_into(A, x, y, LaneGroupPolicy::for_matrix(A));
}

std::vector<double> spmv_row_serial(const CsrMatrix& A,
                                    std::span<const double> x) {
    if (static_cast<index_t>(x.size()) != A.ncols)
        throw std::invalid_argument("spmv_row_serial: dimension mismatch");
    std::vector<double> y(A.nrows);
    for (index_t i = 0; i < A.nrows; ++i) {
        double acc = 0.0;
        for (index_t k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
            acc += A.values[k] * x[A.col_idx[k]];
        y[i] = acc;
    }
    return y;
}

CsrMatrix transpose(const CsrMatrix& A) {
    CsrMatrix B;
    B.nrows = A.ncols;
    B.ncols = A.nrows;
    B.row_ptr.assign(A.ncols + 1, 0);
    B.col_idx.resize(A.nnz());
    B.values.resize(A.nnz());
    for (index_t k = 0; k < A.nnz(); ++k) ++B.row_ptr[A.col_idx[k] + 1];
    for (index_t j = 0; j < A.ncols; ++j) B.row_ptr[j + 1] += B.row_ptr[j];
    // scatter in ascending source-row order keeps target rows sorted
    std::vector<index_t> cursor(B.row_ptr.begin(), B.row_ptr.end() - 1);
    for (index_t i = 0; i < A.nrows; ++i)
        for (index_t k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) {
            const index_t pos = cursor[A.col_idx[k]]++;
            B.col_idx[pos] = i;
            B.values[pos] = A.values[k];
        }
    return B;
}

namespace {

/// Open-addressing accumulator for one output row of a sparse product.
/// Falls back to a dense marker when the row upper bound approaches the
/// number of columns.
class RowAccumulator {
public:
    void reset(index_t ncols, index_t upper_bound) {
        cols_.clear();
        if (upper_bound >= ncols / 4) {
            if (static_cast<index_t>(dense_val_.size()) != ncols) {
                dense_val_.assign(ncols, 0.0);
                dense_mark_.assign(ncols, 0);
            }
            dense_ = true;
            ++epoch_;
            if (epoch_ == 0) { // wrapped
                std::fill(dense_mark_.begin(), dense_mark_.end(), 0);
                ++epoch_;
            }
            return;
        }
        dense_ = false;
        index_t cap = 16;
        while (cap < 2 * upper_bound) cap <<= 1;
        if (static_cast<index_t>(hash_key_.size()) < cap) {
            hash_key_.resize(cap);
            hash_val_.resize(cap);
        }
        mask_ = cap - 1;
        std::fill_n(hash_key_.begin(), cap, kEmpty);
    }

    void add(index_t col, double v) {
        if (dense_) {
            if (dense_mark_[col] != epoch_) {
                dense_mark_[col] = epoch_;
                dense_val_[col] = v;
                cols_.push_back(col);
            } else {
                dense_val_[col] += v;
            }
            return;
        }
        index_t slot = (col * 0x9E3779B97F4A7C15ULL) & mask_;
        while (true) {
            if (hash_key_[slot] == col) {
                hash_val_[slot] += v;
                return;
            }
            if (hash_key_[slot] == kEmpty) {
                hash_key_[slot] = col;
                hash_val_[slot] = v;
                cols_.push_back(col);
                return;
            }
            slot = (slot + 1) & mask_;
        }
    }

    index_t count() const { return static_cast<index_t>(cols_.size()); }

    /// Writes the row sorted by column index.
    void extract(index_t* cols_out, double* vals_out) {
        std::sort(cols_.begin(), cols_.end());
        for (std::size_t t = 0; t < cols_.size(); ++t) {
            const index_t col = cols_[t];
            cols_out[t] = col;
            vals_out[t] = dense_ ? dense_val_[col] : lookup(col);
        }
    }

private:
    static constexpr index_t kEmpty = -1;

    double lookup(index_t col) const {
        index_t slot = (col * 0x9E3779B97F4A7C15ULL) & mask_;
        while (hash_key_[slot] != col) slot = (slot + 1) & mask_;
        return hash_val_[slot];
    }

    bool dense_ = false;
    index_t mask_ = 0;
    std::vector<index_t> hash_key_;
    std::vector<double> hash_val_;
    std::vector<double> dense_val_;
    std::vector<std::uint32_t> dense_mark_;
    std::uint32_t epoch_ = 0;
    std::vector<index_t> cols_;
};

index_t product_row_upper_bound(const CsrMatrix& A, const CsrMatrix& B,
                                index_t i) {
    index_t ub = 0;
    for (index_t k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
        ub += B.row_nnz(A.col_idx[k]);
    return ub;
}

} // namespace

CsrMatrix spgemm(const CsrMatrix& A, const CsrMatrix& B) {
    if (A.ncols != B.nrows)
        throw std::invalid_argument(
            "spgemm: inner dimensions " + std::to_string(A.ncols) + " and " +
            std::to_string(B.nrows) + " differ");

    CsrMatrix C;
    C.nrows = A.nrows;
    C.ncols = B.ncols;
    C.row_ptr.assign(A.nrows + 1, 0);

    // symbolic phase: distinct column count per row
#pragma omp parallel
    {
        RowAccumulator acc;
#pragma omp for schedule(dynamic, 64)
        for (index_t i = 0; i < A.nrows; ++i) {
            acc.reset(B.ncols, product_row_upper_bound(A, B, i));
            for (index_t k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) {
                const index_t j = A.col_idx[k];
                for (index_t t = B.row_ptr[j]; t < B.row_ptr[j + 1]; ++t)
                    acc.add(B.col_idx[t], 0.0);
            }
            C.row_ptr[i + 1] = acc.count();
        }
    }
    for (index_t i = 0; i < A.nrows; ++i) C.row_ptr[i + 1] += C.row_ptr[i];
    C.col_idx.resize(C.row_ptr[A.nrows]);
    C.values.resize(C.row_ptr[A.nrows]);

    // numeric phase
#pragma omp parallel
    {
        RowAccumulator acc;
#pragma omp for schedule(dynamic, 64)
        for (index_t i = 0; i < A.nrows; ++i) {
            acc.reset(B.ncols, product_row_upper_bound(A, B, i));
            for (index_t k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) {
                const index_t j = A.col_idx[k];
                const double a = A.values[k];
                for (index_t t = B.row_ptr[j]; t < B.row_ptr[j + 1]; ++t)
                    acc.add(B.col_idx[t], a * B.values[t]);
            }
            acc.extract(C.col_idx.data() + C.row_ptr[i],
                        C.values.data() + C.row_ptr[i]);
        }
    }
    return C;
}

CsrMatrix galerkin_triple(const CsrMatrix& A, const CsrMatrix& P) {
    if (A.nrows != A.ncols)
        throw std::invalid_argument("galerkin_triple: A is not square");
    if (A.nrows != P.nrows)
        throw std::invalid_argument("galerkin_triple: A and P row counts differ");
    return spgemm(transpose(P), spgemm(A, P));
}

std::vector<double> l1_diagonal(const CsrMatrix& A) {
    if (A.nrows != A.ncols)
        throw std::invalid_argument("l1_diagonal: matrix is not square");
    std::vector<double> d(A.nrows);
#pragma omp parallel for schedule(static)
    for (index_t i = 0; i < A.nrows; ++i) {
        double diag = 0.0;
        double off = 0.0;
        bool have_diag = false;
        for (index_t k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) {
            if (A.col_idx[k] == i) {
                diag = A.values[k];
                have_diag = true;
            } else {
                off += std::abs(A.values[k]);
            }
        }
        if (!have_diag || diag == 0.0) {
            d[i] = std::numeric_limits<double>::quiet_NaN();
        } else {
            d[i] = diag + off;
        }
    }
    for (index_t i = 0; i < A.nrows; ++i)
        if (std::isnan(d[i]))
            throw std::invalid_argument(
                "l1_diagonal: zero or missing diagonal entry in row " +
                std::to_string(i));
    return d;
}

} // namespace matchamg
