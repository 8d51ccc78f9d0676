/// @file coarsening.hpp
/// @brief Matching-driven pairwise aggregation, piecewise-constant
///        prolongators and the multilevel hierarchy setup.

#ifndef MATCHAMG_COARSENING_HPP
#define MATCHAMG_COARSENING_HPP

#include <span>
#include <vector>

#include "matchamg/csr.hpp"
#include "matchamg/matching.hpp"

namespace matchamg {

/// Disjoint cover of the fine index space by aggregates of size 1 or 2.
struct Aggregation {
    std::vector<index_t> agg_of; ///< vertex -> aggregate id, ids in [0, n_c)
    index_t n_c = 0;             ///< aggregate count, n_c = n_p + n_s
    index_t n_p = 0;             ///< matched pairs
    index_t n_s = 0;             ///< singletons
};

/// Matched pairs become 2-aggregates, unmatched vertices singletons.
/// Aggregate ids are assigned in ascending order of the smallest member.
Aggregation pairwise_aggregate(const Matching& M, index_t n);

/// P is n x n_c with one nonzero per row: P[i, agg_of[i]] = w_i / ||w|I||_2
/// where I is i's aggregate. Columns have unit 2-norm, so P^T P = I.
/// A singleton whose w entry is zero gets the unit basis entry 1; an
/// aggregate of size > 1 with w identically zero is an error.
CsrMatrix build_prolongator(const Aggregation& agg, std::span<const double> w);

/// w_c = P^T w (serial scatter in row order; deterministic).
std::vector<double> restrict_vector(const CsrMatrix& P,
                                    std::span<const double> w);

/// Specialized Galerkin product for a prolongator with one nonzero per row:
/// A_c(I, J) = sum_{i in I, j in J} p_i a_ij p_j, accumulated directly from
/// the aggregate map without a general SpGEMM.
CsrMatrix galerkin_by_aggregates(const CsrMatrix& A, const CsrMatrix& P);

/// One aggregation step: composed prolongator, coarse operator and the
/// restricted smooth vector.
struct CoarseningStep {
    CsrMatrix P;
    CsrMatrix A_coarse;
    std::vector<double> w_coarse;
    long zero_weight_edges = 0;
};

/// Single pairwise step: build_weights -> suitor_match -> pairwise_aggregate
/// -> build_prolongator, coarse matrix via galerkin_by_aggregates.
CoarseningStep pairwise_step(const CsrMatrix& A, std::span<const double> w);

/// Two pairwise steps composed, the second run on the coarse matrix of the
/// first with the restricted smooth vector; P = P1 P2, coarsening ratio <= 4.
CoarseningStep double_pairwise(const CsrMatrix& A, std::span<const double> w);

enum class AggregationMode { Pairwise, DoublePairwise };

struct SetupConfig {
    int max_levels = 40;
    /// Coarsest-size bound is coarse_factor * n^(1/3) with n the fine size.
    double coarse_factor = 40.0;
    AggregationMode aggregation = AggregationMode::DoublePairwise;

    void validate() const;
};

/// One level of the hierarchy. P/R are empty on the coarsest level.
struct Level {
    CsrMatrix A;
    CsrMatrix P; ///< prolongator to the next coarser level
    CsrMatrix R; ///< transpose(P)
    std::vector<double> l1_diag;
    std::vector<double> w;

    bool has_transfer() const { return P.nrows > 0; }
};

struct HierarchyStats {
    std::vector<index_t> level_size;
    std::vector<index_t> level_nnz;
    bool stalled = false;          ///< coarsening stopped making progress
    long zero_weight_edges = 0;    ///< accumulated over all levels
};

struct Hierarchy {
    std::vector<Level> levels;
    HierarchyStats stats;

    int nl() const { return static_cast<int>(levels.size()); }
};

/// Repeats the configured aggregation until the coarsest-size bound or the
/// level cap is reached, or coarsening stalls (n_c == n). Requires an s.p.d.
/// matrix with a structurally symmetric pattern.
Hierarchy build_hierarchy(const CsrMatrix& A, std::span<const double> w,
                          const SetupConfig& cfg);

/// Convenience overload using the all-ones smooth vector.
Hierarchy build_hierarchy(const CsrMatrix& A, const SetupConfig& cfg);

struct HierarchySummary {
    int nl = 1;
    double operator_complexity = 1.0; ///< sum_k nnz(A^k) / nnz(A^1)
    double coarsening_ratio = 0.0;    ///< (1/nl) sum_{k=2}^{nl} n^{k-1}/n^k
};

HierarchySummary hierarchy_stats(const Hierarchy& h);

} // namespace matchamg

#endif
