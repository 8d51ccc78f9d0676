#include "matchamg/coarsening.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "matchamg/kernels.hpp"

namespace matchamg {

Aggregation pairwise_aggregate(const Matching& M, index_t n) {
    if (static_cast<index_t>(M.mate.size()) != n)
        throw std::invalid_argument("pairwise_aggregate: mate length != n");
    if (!M.is_valid())
        throw std::invalid_argument("pairwise_aggregate: invalid matching");

    Aggregation agg;
    agg.agg_of.assign(n, -1);
    for (index_t i = 0; i < n; ++i) {
        if (agg.agg_of[i] >= 0) continue;
        const index_t j = M.mate[i];
        if (j != kUnmatched) {
            agg.agg_of[i] = agg.n_c;
            agg.agg_of[j] = agg.n_c;
            ++agg.n_p;
        } else {
            agg.agg_of[i] = agg.n_c;
            ++agg.n_s;
        }
        ++agg.n_c;
    }
    return agg;
}

CsrMatrix build_prolongator(const Aggregation& agg,
                            std::span<const double> w) {
    const index_t n = static_cast<index_t>(agg.agg_of.size());
    if (static_cast<index_t>(w.size()) != n)
        throw std::invalid_argument("build_prolongator: w length mismatch");

    std::vector<double> norm_sq(agg.n_c, 0.0);
    std::vector<index_t> size(agg.n_c, 0);
    for (index_t i = 0; i < n; ++i) {
        const index_t a = agg.agg_of[i];
        if (a < 0 || a >= agg.n_c)
            throw std::invalid_argument(
                "build_prolongator: aggregate id out of range for vertex " +
                std::to_string(i));
        norm_sq[a] += w[i] * w[i];
        ++size[a];
    }
    std::vector<double> norm(agg.n_c);
    for (index_t a = 0; a < agg.n_c; ++a) {
        if (norm_sq[a] == 0.0 && size[a] > 1)
            throw std::invalid_argument(
                "build_prolongator: smooth vector vanishes on aggregate " +
                std::to_string(a));
        norm[a] = std::sqrt(norm_sq[a]);
    }

    CsrMatrix P;
    P.nrows = n;
    P.ncols = agg.n_c;
    P.row_ptr.resize(n + 1);
    P.col_idx.resize(n);
    P.values.resize(n);
    for (index_t i = 0; i <= n; ++i) P.row_ptr[i] = i;
    for (index_t i = 0; i < n; ++i) {
        const index_t a = agg.agg_of[i];
        P.col_idx[i] = a;
        // singleton with w_i = 0: unit basis entry keeps the column unit-norm
        P.values[i] = norm[a] == 0.0 ? 1.0 : w[i] / norm[a];
    }
    return P;
}

std::vector<double> restrict_vector(const CsrMatrix& P,
                                    std::span<const double> w) {
    if (static_cast<index_t>(w.size()) != P.nrows)
        throw std::invalid_argument("restrict_vector: length mismatch");
    std::vector<double> wc(P.ncols, 0.0);
    for (index_t i = 0; i < P.nrows; ++i)
        for (index_t k = P.row_begin(i); k < P.row_end(i); ++k)
            wc[P.col_idx[k]] += P.values[k] * w[i];
    return wc;
}

CsrMatrix galerkin_by_aggregates(const CsrMatrix& A, const CsrMatrix& P) {
    if (A.nrows != A.ncols || A.nrows != P.nrows)
        throw std::invalid_argument("galerkin_by_aggregates: shape mismatch");
    const index_t n = A.nrows;
    const index_t nc = P.ncols;
    for (index_t i = 0; i < n; ++i)
        if (P.row_nnz(i) != 1)
            throw std::invalid_argument(
                "galerkin_by_aggregates: row " + std::to_string(i) +
                " of P has " + std::to_string(P.row_nnz(i)) +
                " nonzeros, expected 1");

    // members of each aggregate, grouped in ascending vertex order
    std::vector<index_t> member_ptr(nc + 1, 0);
    for (index_t i = 0; i < n; ++i) ++member_ptr[P.col_idx[i] + 1];
    for (index_t a = 0; a < nc; ++a) member_ptr[a + 1] += member_ptr[a];
    std::vector<index_t> members(n);
    {
        std::vector<index_t> cursor(member_ptr.begin(), member_ptr.end() - 1);
        for (index_t i = 0; i < n; ++i) members[cursor[P.col_idx[i]]++] = i;
    }

    CsrMatrix C;
    C.nrows = C.ncols = nc;
    C.row_ptr.assign(nc + 1, 0);

    // two-phase accumulation over coarse rows, deterministic member order
    std::vector<std::vector<std::pair<index_t, double>>> rows(nc);
#pragma omp parallel
    {
        std::vector<index_t> mark(nc, -1);
        std::vector<double> val(nc, 0.0);
        std::vector<index_t> touched;
#pragma omp for schedule(dynamic, 64)
        for (index_t I = 0; I < nc; ++I) {
            touched.clear();
            for (index_t m = member_ptr[I]; m < member_ptr[I + 1]; ++m) {
                const index_t i = members[m];
                const double pi = P.values[i];
                for (index_t k = A.row_begin(i); k < A.row_end(i); ++k) {
                    const index_t j = A.col_idx[k];
                    const index_t J = P.col_idx[j];
                    const double contrib = pi * A.values[k] * P.values[j];
                    if (mark[J] != I) {
                        mark[J] = I;
                        val[J] = contrib;
                        touched.push_back(J);
                    } else {
                        val[J] += contrib;
                    }
                }
            }
            std::sort(touched.begin(), touched.end());
            auto& out = rows[I];
            out.reserve(touched.size());
            for (index_t J : touched) out.emplace_back(J, val[J]);
            C.row_ptr[I + 1] = static_cast<index_t>(touched.size());
        }
    }
    for (index_t I = 0; I < nc; ++I) C.row_ptr[I + 1] += C.row_ptr[I];
    C.col_idx.resize(C.row_ptr[nc]);
    C.values.resize(C.row_ptr[nc]);
#pragma omp parallel for schedule(static)
    for (index_t I = 0; I < nc; ++I) {
        index_t pos = C.row_ptr[I];
        for (const auto& [J, v] : rows[I]) {
            C.col_idx[pos] = J;
            C.values[pos] = v;
            ++pos;
        }
    }
    return C;
}

CoarseningStep pairwise_step(const CsrMatrix& A, std::span<const double> w) {
    const WeightedGraph G = build_weights(A, w);
    const Matching M = suitor_match(G);
    const Aggregation agg = pairwise_aggregate(M, A.nrows);
    CoarseningStep step;
    step.P = build_prolongator(agg, w);
    step.A_coarse = galerkin_by_aggregates(A, step.P);
    step.w_coarse = restrict_vector(step.P, w);
    step.zero_weight_edges = G.zero_weight_edges;
    return step;
}

CoarseningStep double_pairwise(const CsrMatrix& A, std::span<const double> w) {
    CoarseningStep first = pairwise_step(A, w);
    CoarseningStep second = pairwise_step(first.A_coarse, first.w_coarse);
    CoarseningStep combined;
    combined.P = spgemm(first.P, second.P);
    combined.A_coarse = std::move(second.A_coarse);
    combined.w_coarse = std::move(second.w_coarse);
    combined.zero_weight_edges =
        first.zero_weight_edges + second.zero_weight_edges;
    return combined;
}

void SetupConfig::validate() const {
    if (max_levels < 1)
        throw std::invalid_argument("SetupConfig: max_levels must be >= 1");
    if (!(coarse_factor > 0.0))
        throw std::invalid_argument("SetupConfig: coarse_factor must be > 0");
}

Hierarchy build_hierarchy(const CsrMatrix& A, std::span<const double> w,
                          const SetupConfig& cfg) {
    cfg.validate();
    if (A.nrows != A.ncols)
        throw std::invalid_argument("build_hierarchy: matrix is not square");
    if (static_cast<index_t>(w.size()) != A.nrows)
        throw std::invalid_argument("build_hierarchy: w length mismatch");
    if (!has_symmetric_pattern(A))
        throw std::invalid_argument(
            "build_hierarchy: matrix pattern is not symmetric");

    const double bound =
        cfg.coarse_factor * std::cbrt(static_cast<double>(A.nrows));

    Hierarchy h;
    h.levels.push_back(Level{A, {}, {}, l1_diagonal(A),
                             std::vector<double>(w.begin(), w.end())});

    while (static_cast<double>(h.levels.back().A.nrows) > bound &&
           h.nl() < cfg.max_levels) {
        Level& fine = h.levels.back();
        CoarseningStep step =
            cfg.aggregation == AggregationMode::DoublePairwise
                ? double_pairwise(fine.A, fine.w)
                : pairwise_step(fine.A, fine.w);
        h.stats.zero_weight_edges += step.zero_weight_edges;
        if (step.A_coarse.nrows == fine.A.nrows) {
            h.stats.stalled = true;
            break;
        }
        fine.P = std::move(step.P);
        fine.R = transpose(fine.P);
        Level coarse;
        coarse.A = std::move(step.A_coarse);
        coarse.l1_diag = l1_diagonal(coarse.A);
        coarse.w = std::move(step.w_coarse);
        h.levels.push_back(std::move(coarse));
    }

    for (const Level& lvl : h.levels) {
        h.stats.level_size.push_back(lvl.A.nrows);
        h.stats.level_nnz.push_back(lvl.A.nnz());
    }
    return h;
}

Hierarchy build_hierarchy(const CsrMatrix& A, const SetupConfig& cfg) {
    return build_hierarchy(A, std::vector<double>(A.nrows, 1.0), cfg);
}

HierarchySummary hierarchy_stats(const Hierarchy& h) {
    HierarchySummary s;
    s.nl = h.nl();
    double nnz_sum = 0.0;
    for (const Level& lvl : h.levels) nnz_sum += static_cast<double>(lvl.A.nnz());
    s.operator_complexity =
        nnz_sum / static_cast<double>(h.levels.front().A.nnz());
    double ratio_sum = 0.0;
    for (int k = 1; k < s.nl; ++k)
        ratio_sum += static_cast<double>(h.levels[k - 1].A.nrows) /
                     static_cast<double>(h.levels[k].A.nrows);
    s.coarsening_ratio = ratio_sum / static_cast<double>(s.nl);
    return s;
}

} // namespace matchamg
