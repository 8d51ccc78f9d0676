/// @file matching.hpp
/// @brief Edge-weight graph construction and approximate maximum weight
///        matching (Suitor algorithm), plus an exhaustive oracle for tests.
///
/// The edge weights couple the matrix entries with a sample w of
/// algebraically smooth vectors:
///
///     c_ij = 1 - 2 a_ij w_i w_j / (a_ii w_i^2 + a_jj w_j^2)
///
/// For s.p.d. A and (w_i, w_j) != (0, 0) the 2x2 principal minor forces
/// c_ij into (0, 2). Vertices matched along heavy edges form the aggregate
/// pairs of the coarsening step.

#ifndef MATCHAMG_MATCHING_HPP
#define MATCHAMG_MATCHING_HPP

#include <span>
#include <vector>

#include "matchamg/csr.hpp"

namespace matchamg {

inline constexpr index_t kUnmatched = -1;

/// Symmetric weighted adjacency graph of the off-diagonal pattern of A.
struct WeightedGraph {
    index_t n = 0;
    std::vector<index_t> xadj{0};  ///< CSR offsets, length n+1
    std::vector<index_t> adjncy;   ///< neighbor lists, sorted per vertex
    std::vector<double> weight;    ///< edge weight, mirrored exactly
    long zero_weight_edges = 0;    ///< edges with w_i = w_j = 0 (weight set to 0)

    index_t degree(index_t v) const { return xadj[v + 1] - xadj[v]; }
};

/// mate[i] = j when edge (i, j) is matched, kUnmatched otherwise.
/// mate is an involution without fixed points on matched vertices.
struct Matching {
    std::vector<index_t> mate;

    index_t matched_vertices() const;
    bool is_valid() const;
};

/// Builds C(A, w). Requires a structurally symmetric pattern and a positive
/// diagonal; edges whose weight denominator vanishes (w zero on both ends)
/// get weight 0 and are counted in zero_weight_edges.
WeightedGraph build_weights(const CsrMatrix& A, std::span<const double> w);

/// Deterministic sequential Suitor: each vertex proposes to its best
/// admissible neighbor, dislodged suitors re-propose. Admissibility and the
/// neighbor choice use a strict total order on edges (weight descending,
/// ties toward the lexicographically smaller endpoint pair), which makes the
/// result equal to the greedy matching on that order and hence at least half
/// the optimal weight for nonnegative weights. Edges with negative weight
/// are never proposed.
Matching suitor_match(const WeightedGraph& G);

/// Maximum weight matching by bitmask dynamic programming over vertex
/// subsets. Test oracle; throws for n > 20.
Matching exact_match_oracle(const WeightedGraph& G);

/// Total weight of a matching (each matched edge counted once).
double matching_weight(const WeightedGraph& G, const Matching& M);

} // namespace matchamg

#endif
