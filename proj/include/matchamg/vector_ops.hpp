/// @file vector_ops.hpp
/// @brief Dense vector kernels for the Krylov solver: blocked deterministic
///        reductions, the fused triple scalar product and the paired AXPY
///        update used by the reordered conjugate gradient loop.

#ifndef MATCHAMG_VECTOR_OPS_HPP
#define MATCHAMG_VECTOR_OPS_HPP

#include <span>
#include <vector>

namespace matchamg {

/// Dot product with fixed-block pairwise reduction. The block structure is
/// independent of the thread count, so results are bitwise reproducible.
double dot(std::span<const double> x, std::span<const double> y);

double norm2(std::span<const double> x);

/// y += a x
void axpy(std::span<double> y, double a, std::span<const double> x);

struct TripleDot {
    double wr; ///< w . r
    double wv; ///< w . v
    double wq; ///< w . q_prev
};

/// Three scalar products in one traversal of w. Each component uses the same
/// blocked reduction as dot(), so it matches the standalone product bitwise.
TripleDot fused_triple_dot(std::span<const double> w, std::span<const double> r,
                           std::span<const double> v,
                           std::span<const double> q_prev);

/// Paired AXPY: y1 += a x, then y2 += b y1, in a single pass with the
/// updated y1 element reused immediately. Elementwise identical to the two
/// unfused updates.
void fused_axpy_pair(std::span<double> y1, std::span<double> y2,
                     std::span<const double> x, double a, double b);

} // namespace matchamg

#endif
