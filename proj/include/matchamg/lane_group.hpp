/// @file lane_group.hpp
/// @brief Lane-group partitioning policy for the row-parallel sparse kernels.
///
/// The policy assigns a small group of accumulator lanes to each matrix row,
/// sized to the mean number of nonzeros per row, so that short rows do not
/// pay for a full-width accumulator and long rows still get strided,
/// SIMD-friendly traversal.

#ifndef MATCHAMG_LANE_GROUP_HPP
#define MATCHAMG_LANE_GROUP_HPP

#include "matchamg/csr.hpp"

namespace matchamg {

struct LaneGroupPolicy {
    static constexpr int kAdmissible[6] = {1, 2, 4, 8, 16, 32};
    static constexpr int kMaxGroup = 32;

    int group_size = 2;

    /// Selection rule: the smallest admissible size >= mean nnz per row,
    /// capped at 32. Size 1 is chosen only when every row has exactly one
    /// nonzero (the plain-aggregation prolongator case).
    static LaneGroupPolicy for_matrix(const CsrMatrix& A);

    /// Fixed policy for benchmarking sweeps; throws on non-admissible sizes.
    static LaneGroupPolicy fixed(int group_size);
};

} // namespace matchamg

#endif
