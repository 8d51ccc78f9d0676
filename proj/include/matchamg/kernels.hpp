/// @file kernels.hpp
/// @brief Parallel sparse kernels: SpMV, transpose, SpGEMM and the Galerkin
///        triple product.
///
/// All kernels are row-parallel and deterministic: accumulation order within
/// a row is fixed by the lane-group policy, so repeated runs produce bitwise
/// identical results at any thread count.

#ifndef MATCHAMG_KERNELS_HPP
#define MATCHAMG_KERNELS_HPP

#include <span>
#include <vector>

#include "matchamg/csr.hpp"
#include "matchamg/lane_group.hpp"

namespace matchamg {

/// y = A x with an explicit lane-group policy.
void spmv_into(const CsrMatrix& A, std::span<const double> x,
               std::span<double> y, LaneGroupPolicy policy);

std::vector<double> spmv(const CsrMatrix& A, std::span<const double> x,
                         LaneGroupPolicy policy);

/// y = A x with the policy selected from the matrix shape.
std::vector<double> spmv(const CsrMatrix& A, std::span<const double> x);
void spmv_into(const CsrMatrix& A, std::span<const double> x,
               std::span<double> y);

/// Single-threaded one-accumulator-per-row baseline (benchmark reference).
std::vector<double> spmv_row_serial(const CsrMatrix& A,
                                    std::span<const double> x);

/// B = A^T with sorted rows; preserves nnz exactly.
CsrMatrix transpose(const CsrMatrix& A);

/// C = A B via two-phase row-parallel hash accumulation (symbolic nnz count,
/// then numeric fill). Output rows are sorted; entries that cancel to zero
/// during accumulation are kept.
CsrMatrix spgemm(const CsrMatrix& A, const CsrMatrix& B);

/// (P^T) (A P) computed as one transpose plus two spgemm calls.
CsrMatrix galerkin_triple(const CsrMatrix& A, const CsrMatrix& P);

/// d_i = a_ii + sum_{j != i} |a_ij|. Throws if a diagonal entry is missing
/// or zero, naming the row.
std::vector<double> l1_diagonal(const CsrMatrix& A);

} // namespace matchamg

#endif
