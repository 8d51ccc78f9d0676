#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "matchamg/coarsening.hpp"
#include "matchamg/kernels.hpp"
#include "matchamg/problems.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace matchamg;
using namespace matchamg::testing;

namespace {

CsrMatrix poisson_1d(index_t n) {
    std::vector<Triplet> t;
    for (index_t i = 0; i < n; ++i) {
        if (i > 0) t.push_back({i, i - 1, -1.0});
        t.push_back({i, i, 2.0});
        if (i + 1 < n) t.push_back({i, i + 1, -1.0});
    }
    return CsrMatrix::from_triplets(n, n, std::move(t));
}

Matching matching_from_pairs(
    index_t n, const std::vector<std::pair<index_t, index_t>>& pairs) {
    Matching M;
    M.mate.assign(n, kUnmatched);
    for (auto [i, j] : pairs) {
        M.mate[i] = j;
        M.mate[j] = i;
    }
    return M;
}

} // namespace

TEST_CASE("pairwise_aggregate traces of the aggregation loop") {
    const Aggregation a = pairwise_aggregate(matching_from_pairs(4, {{1, 2}}), 4);
    CHECK(a.agg_of == std::vector<index_t>{0, 1, 1, 2});
    CHECK(a.n_c == 3);
    CHECK(a.n_p == 1);
    CHECK(a.n_s == 2);

    const Aggregation empty = pairwise_aggregate(matching_from_pairs(3, {}), 3);
    CHECK(empty.n_c == 3);
    CHECK(empty.n_s == 3);
    CHECK(empty.agg_of == std::vector<index_t>{0, 1, 2});

    const Aggregation perfect =
        pairwise_aggregate(matching_from_pairs(6, {{0, 3}, {1, 4}, {2, 5}}), 6);
    CHECK(perfect.n_c == 3);
    CHECK(perfect.n_p == 3);
    CHECK(perfect.n_s == 0);
    // ascending smallest-member order
    CHECK(perfect.agg_of == std::vector<index_t>{0, 1, 2, 0, 1, 2});

    Matching bad;
    bad.mate = {1, kUnmatched};
    CHECK_THROWS_AS(pairwise_aggregate(bad, 2), std::invalid_argument);
}

TEST_CASE("pairwise invariants: coverage and n_c = n_p + n_s") {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const index_t n = 1 + rng.index(40);
        const WeightedGraph G = random_graph(n, 0.3, rng);
        const Aggregation a = pairwise_aggregate(suitor_match(G), n);
        CHECK(a.n_c == a.n_p + a.n_s);
        std::vector<index_t> size(a.n_c, 0);
        for (index_t i = 0; i < n; ++i) {
            REQUIRE(a.agg_of[i] >= 0);
            REQUIRE(a.agg_of[i] < a.n_c);
            ++size[a.agg_of[i]];
        }
        index_t total = 0;
        for (index_t s : size) {
            CHECK(s >= 1);
            CHECK(s <= 2);
            total += s;
        }
        CHECK(total == n);
    }
}

TEST_CASE("build_prolongator normalization cases") {
    Aggregation one_pair;
    one_pair.agg_of = {0, 0};
    one_pair.n_c = 1;
    one_pair.n_p = 1;
    const CsrMatrix P = build_prolongator(one_pair, std::vector<double>{1.0, 1.0});
    CHECK(P.values[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(P.values[1] == doctest::Approx(1.0 / std::sqrt(2.0)));

    Aggregation singleton;
    singleton.agg_of = {0};
    singleton.n_c = 1;
    singleton.n_s = 1;
    CHECK(build_prolongator(singleton, std::vector<double>{-3.0}).values[0] ==
          -1.0);
    // zero w on a singleton: unit basis fallback
    CHECK(build_prolongator(singleton, std::vector<double>{0.0}).values[0] ==
          1.0);

    // zero w on a pair aggregate is an error naming the aggregate
    CHECK_THROWS_WITH_AS(
        build_prolongator(one_pair, std::vector<double>{0.0, 0.0}),
        "build_prolongator: smooth vector vanishes on aggregate 0",
        std::invalid_argument);
}

TEST_CASE("prolongator orthonormality on random aggregations") {
    Rng rng(19);
    for (int trial = 0; trial < 30; ++trial) {
        const index_t n = 2 + rng.index(80);
        const Aggregation agg = random_aggregation(n, rng);
        const CsrMatrix P = build_prolongator(agg, random_nonzero_vector(n, rng));
        P.validate();
        const CsrMatrix G = spgemm(transpose(P), P);
        CHECK(rel_diff(G, CsrMatrix::identity(agg.n_c)) <= 1e-13);
    }
}

TEST_CASE("restrict_vector") {
    Aggregation one_pair;
    one_pair.agg_of = {0, 0};
    one_pair.n_c = 1;
    one_pair.n_p = 1;
    const std::vector<double> w{1.0, 1.0};
    const CsrMatrix P = build_prolongator(one_pair, w);
    const std::vector<double> wc = restrict_vector(P, w);
    REQUIRE(wc.size() == 1);
    CHECK(wc[0] == doctest::Approx(std::sqrt(2.0)));

    const CsrMatrix I = CsrMatrix::identity(4);
    const std::vector<double> v{0.5, -1.0, 2.0, 0.0};
    CHECK(restrict_vector(I, v) == v);
    CHECK_THROWS_AS(restrict_vector(I, std::vector<double>{1.0}),
                    std::invalid_argument);

    // projection never grows the norm
    Rng rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        const index_t n = 2 + rng.index(60);
        const Aggregation agg = random_aggregation(n, rng);
        const std::vector<double> wv = random_nonzero_vector(n, rng);
        const CsrMatrix Pr = build_prolongator(agg, wv);
        const std::vector<double> rv = random_vector(n, rng);
        const std::vector<double> rc = restrict_vector(Pr, rv);
        CHECK(to_eigen(rc).norm() <= to_eigen(rv).norm() + 1e-12);
    }
}

TEST_CASE("galerkin_by_aggregates identities and oracle equivalence") {
    Rng rng(43);
    const CsrMatrix A2 = CsrMatrix::from_triplets(
        2, 2, {{0, 0, 2.0}, {0, 1, -1.0}, {1, 0, -1.0}, {1, 1, 2.0}});
    Aggregation one_pair;
    one_pair.agg_of = {0, 0};
    one_pair.n_c = 1;
    one_pair.n_p = 1;
    const CsrMatrix P = build_prolongator(one_pair, std::vector<double>{1.0, 1.0});
    const CsrMatrix Ac = galerkin_by_aggregates(A2, P);
    CHECK(Ac.nnz() == 1);
    CHECK(Ac.values[0] == doctest::Approx(1.0)); // (2 - 1 - 1 + 2) / 2

    const CsrMatrix A = random_spd(30, 4, rng);
    CHECK(rel_diff(galerkin_by_aggregates(A, CsrMatrix::identity(30)), A) == 0.0);

    // a row with two nonzeros is rejected
    const CsrMatrix bad = CsrMatrix::from_triplets(
        2, 2, {{0, 0, 1.0}, {0, 1, 1.0}, {1, 1, 1.0}});
    CHECK_THROWS_AS(galerkin_by_aggregates(A2, bad), std::invalid_argument);

    for (int trial = 0; trial < 30; ++trial) {
        const index_t n = 3 + rng.index(60);
        const CsrMatrix R = random_spd(n, 4, rng);
        const Aggregation agg = random_aggregation(n, rng);
        const CsrMatrix Pr = build_prolongator(agg, random_nonzero_vector(n, rng));
        CHECK(rel_diff(galerkin_by_aggregates(R, Pr), galerkin_triple(R, Pr)) <=
              1e-12);
    }
}

TEST_CASE("double_pairwise structure") {
    const CsrMatrix A = poisson_1d(16);
    const std::vector<double> ones(16, 1.0);
    const CoarseningStep step = double_pairwise(A, ones);
    step.P.validate();
    step.A_coarse.validate();
    CHECK(step.A_coarse.nrows >= 4); // ratio bounded by 4
    CHECK(16 / step.A_coarse.nrows <= 4);
    for (index_t i = 0; i < step.P.nrows; ++i) CHECK(step.P.row_nnz(i) == 1);
    const CsrMatrix G = spgemm(transpose(step.P), step.P);
    CHECK(rel_diff(G, CsrMatrix::identity(step.P.ncols)) <= 1e-13);
    // composed P reproduces the Galerkin operator
    CHECK(rel_diff(step.A_coarse, galerkin_triple(A, step.P)) <= 1e-12);
    CHECK(step.w_coarse.size() == static_cast<std::size_t>(step.A_coarse.nrows));
}

TEST_CASE("double_pairwise degenerate n=1") {
    const CsrMatrix A = CsrMatrix::from_triplets(1, 1, {{0, 0, 2.0}});
    const CoarseningStep step = double_pairwise(A, std::vector<double>{1.0});
    CHECK(step.P.nrows == 1);
    CHECK(step.P.ncols == 1);
    CHECK(step.P.values[0] == doctest::Approx(1.0));
    CHECK(step.A_coarse.values[0] == doctest::Approx(2.0));
}

TEST_CASE("build_hierarchy bound arithmetic: no coarsening below the bound") {
    Rng rng(61);
    const CsrMatrix A = random_spd(50, 3, rng);
    const Hierarchy h = build_hierarchy(A, SetupConfig{});
    CHECK(h.nl() == 1); // bound = 40 * 50^(1/3) ~ 147 >= 50
    CHECK_FALSE(h.stats.stalled);
    CHECK(hierarchy_stats(h).nl == 1);
}

TEST_CASE("build_hierarchy on 2D Poisson 64x64") {
    const CsrMatrix A = gen_poisson_2d(64, 64);
    const Hierarchy h = build_hierarchy(A, SetupConfig{});
    CHECK(h.nl() >= 3);
    CHECK(h.nl() <= 4);
    CHECK_FALSE(h.stats.stalled);
    for (int k = 0; k + 1 < h.nl(); ++k) {
        const Level& lvl = h.levels[k];
        // per-step coarsening never exceeds 4
        CHECK(static_cast<double>(lvl.A.nrows) /
                  static_cast<double>(h.levels[k + 1].A.nrows) <=
              4.0 + 1e-12);
        CHECK(h.levels[k + 1].A.nrows < lvl.A.nrows);
        // Level invariants
        for (index_t i = 0; i < lvl.P.nrows; ++i) CHECK(lvl.P.row_nnz(i) == 1);
        CHECK(rel_diff(spgemm(lvl.R, lvl.P), CsrMatrix::identity(lvl.P.ncols)) <=
              1e-13);
        CHECK(symmetry_gap(lvl.A) <= 1e-12 * max_abs(lvl.A));
        CHECK(lvl.l1_diag == l1_diagonal(lvl.A));
    }
    // coarse matrices keep positive diagonals
    for (const Level& lvl : h.levels)
        for (double dv : diagonal(lvl.A)) CHECK(dv > 0.0);
    const Level& coarsest = h.levels.back();
    CHECK_FALSE(coarsest.has_transfer());
    CHECK(symmetry_gap(coarsest.A) <= 1e-12 * max_abs(coarsest.A));
    // coarsest below the bound
    CHECK(static_cast<double>(coarsest.A.nrows) <=
          40.0 * std::cbrt(4096.0) + 1e-9);
}

TEST_CASE("build_hierarchy stalls on a diagonal matrix") {
    std::vector<Triplet> t;
    for (index_t i = 0; i < 300; ++i) t.push_back({i, i, 1.0 + i});
    const CsrMatrix D = CsrMatrix::from_triplets(300, 300, std::move(t));
    const Hierarchy h = build_hierarchy(D, SetupConfig{});
    CHECK(h.nl() == 1);
    CHECK(h.stats.stalled);
}

TEST_CASE("build_hierarchy rejects an asymmetric pattern") {
    const CsrMatrix asym = CsrMatrix::from_triplets(
        2, 2, {{0, 0, 1.0}, {0, 1, 1.0}, {1, 1, 1.0}});
    CHECK_THROWS_AS(build_hierarchy(asym, SetupConfig{}), std::invalid_argument);
}

TEST_CASE("pairwise aggregation mode halves at most once per level") {
    const CsrMatrix A = gen_poisson_2d(32, 32);
    SetupConfig cfg;
    cfg.aggregation = AggregationMode::Pairwise;
    const Hierarchy h = build_hierarchy(A, cfg);
    for (int k = 0; k + 1 < h.nl(); ++k)
        CHECK(static_cast<double>(h.levels[k].A.nrows) /
                  static_cast<double>(h.levels[k + 1].A.nrows) <=
              2.0 + 1e-12);
}

TEST_CASE("hierarchy_stats formulas") {
    // single level
    Hierarchy single;
    single.levels.push_back(
        Level{CsrMatrix::identity(10), {}, {}, std::vector<double>(10, 1.0),
              std::vector<double>(10, 1.0)});
    const HierarchySummary s1 = hierarchy_stats(single);
    CHECK(s1.nl == 1);
    CHECK(s1.operator_complexity == doctest::Approx(1.0));
    CHECK(s1.coarsening_ratio == doctest::Approx(0.0));

    // synthetic sizes (100, 25, 7) and nnz (100, 30, 10)
    auto square_with_nnz = [](index_t n, index_t nnz) {
        std::vector<Triplet> t;
        index_t count = 0;
        for (index_t i = 0; i < n && count < nnz; ++i)
            for (index_t j = 0; j < n && count < nnz; ++j, ++count)
                t.push_back({i, j, 1.0});
        return CsrMatrix::from_triplets(n, n, std::move(t));
    };
    Hierarchy h;
    h.levels.push_back(Level{square_with_nnz(100, 100), {}, {}, {}, {}});
    h.levels.push_back(Level{square_with_nnz(25, 30), {}, {}, {}, {}});
    h.levels.push_back(Level{square_with_nnz(7, 10), {}, {}, {}, {}});
    const HierarchySummary s = hierarchy_stats(h);
    CHECK(s.nl == 3);
    CHECK(s.operator_complexity == doctest::Approx(1.4));
    CHECK(s.coarsening_ratio ==
          doctest::Approx((100.0 / 25.0 + 25.0 / 7.0) / 3.0));
}
