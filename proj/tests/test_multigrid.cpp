#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "matchamg/kernels.hpp"
#include "matchamg/krylov.hpp"
#include "matchamg/multigrid.hpp"
#include "matchamg/problems.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace matchamg;
using namespace matchamg::testing;

namespace {

CsrMatrix small_2x2() {
    return CsrMatrix::from_triplets(
        2, 2, {{0, 0, 2.0}, {0, 1, -1.0}, {1, 0, -1.0}, {1, 1, 2.0}});
}

/// Dense assembly of the cycle-with-zero-guess operator B via unit vectors.
Eigen::MatrixXd assemble_cycle_operator(const Hierarchy& h, CycleConfig cfg) {
    const index_t n = h.levels.front().A.nrows;
    MultigridPreconditioner precond(h, cfg);
    Eigen::MatrixXd B(n, n);
    std::vector<double> e(n, 0.0), z(n);
    for (index_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        precond.apply(e, z);
        for (index_t i = 0; i < n; ++i) B(i, j) = z[i];
        e[j] = 0.0;
    }
    return B;
}

} // namespace

TEST_CASE("l1 jacobi: zero sweeps and the hand iteration") {
    const CsrMatrix A = small_2x2();
    const std::vector<double> d = l1_diagonal(A);
    const std::vector<double> b{1.0, 1.0};

    std::vector<double> x{0.3, -0.4};
    const std::vector<double> x_before = x;
    l1_jacobi_sweeps(A, d, b, x, 0);
    CHECK(x == x_before);

    std::vector<double> y{0.0, 0.0};
    l1_jacobi_sweeps(A, d, b, y, 1);
    CHECK(y[0] == doctest::Approx(1.0 / 3.0));
    CHECK(y[1] == doctest::Approx(1.0 / 3.0));

    CHECK_THROWS_AS(
        l1_jacobi_sweeps(A, d, std::vector<double>{1.0}, y, 1),
        std::invalid_argument);
}

TEST_CASE("l1 jacobi iteration matrix is a contraction for s.p.d. matrices") {
    Rng rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        const index_t n = 2 + rng.index(29);
        const CsrMatrix A = random_spd(n, 4, rng);
        const std::vector<double> d = l1_diagonal(A);
        CHECK(jacobi_spectral_radius(A, d) < 1.0);
    }
}

TEST_CASE("vcycle base case: nl = 1 is exactly the coarsest smoother") {
    Rng rng(14);
    const CsrMatrix A = random_spd(50, 3, rng); // below the size bound: nl = 1
    const Hierarchy h = build_hierarchy(A, SetupConfig{});
    REQUIRE(h.nl() == 1);

    CycleConfig cfg;
    const std::vector<double> b = random_vector(50, rng);
    const std::vector<double> x0 = random_vector(50, rng);
    const std::vector<double> x = vcycle(h, 0, b, x0, cfg);

    std::vector<double> expected(50, 0.0); // coarsest ignores the incoming x
    l1_jacobi_sweeps(A, h.levels[0].l1_diag, b, expected,
                     cfg.coarsest_sweeps);
    CHECK(x == expected);
}

TEST_CASE("cycle fixed point at zero") {
    const CsrMatrix A = gen_poisson_2d(16, 16);
    const Hierarchy h = build_hierarchy(A, SetupConfig{});
    const std::vector<double> zero(A.nrows, 0.0);
    CHECK(vcycle(h, 0, zero, zero, CycleConfig{}) == zero);
    CHECK(wcycle(h, 0, zero, zero, CycleConfig{}) == zero);
}

TEST_CASE("cycle rejects a level out of range") {
    const CsrMatrix A = gen_poisson_2d(8, 8);
    const Hierarchy h = build_hierarchy(A, SetupConfig{});
    const std::vector<double> b(A.nrows, 1.0);
    CHECK_THROWS_AS(vcycle(h, h.nl(), b, b, CycleConfig{}),
                    std::invalid_argument);
    CHECK_THROWS_AS(vcycle(h, -1, b, b, CycleConfig{}), std::invalid_argument);
}

TEST_CASE("assembled V-cycle operator is symmetric and linear") {
    // ~100-dim problem with a genuine multilevel hierarchy
    const CsrMatrix A = gen_poisson_2d(10, 10);
    SetupConfig setup;
    setup.coarse_factor = 5.0; // force coarsening at this desk size
    const Hierarchy h = build_hierarchy(A, setup);
    REQUIRE(h.nl() >= 2);

    const Eigen::MatrixXd B = assemble_cycle_operator(h, CycleConfig{});
    const double sym = (B - B.transpose()).cwiseAbs().maxCoeff() /
                       B.cwiseAbs().maxCoeff();
    CHECK(sym <= 1e-12);

    // superposition on random pairs
    Rng rng(77);
    MultigridPreconditioner precond(h, CycleConfig{});
    for (int trial = 0; trial < 20; ++trial) {
        const std::vector<double> r1 = random_vector(A.nrows, rng);
        const std::vector<double> r2 = random_vector(A.nrows, rng);
        const double a = rng.uniform(-2.0, 2.0);
        std::vector<double> z1(A.nrows), z2(A.nrows), z12(A.nrows);
        precond.apply(r1, z1);
        precond.apply(r2, z2);
        std::vector<double> combo(A.nrows);
        for (index_t i = 0; i < A.nrows; ++i) combo[i] = r1[i] + a * r2[i];
        precond.apply(combo, z12);
        double diff = 0.0, scale = 0.0;
        for (index_t i = 0; i < A.nrows; ++i) {
            diff = std::max(diff, std::abs(z12[i] - (z1[i] + a * z2[i])));
            scale = std::max(scale, std::abs(z12[i]));
        }
        CHECK(diff <= 5e-13 * std::max(1.0, scale));
    }
}

TEST_CASE("pre/post smoothing share one routine (diagonal smoother M = M^T)") {
    const CsrMatrix A = gen_poisson_2d(12, 12);
    const std::vector<double> d = l1_diagonal(A);
    Rng rng(31);
    const std::vector<double> b = random_vector(A.nrows, rng);
    std::vector<double> x_pre = random_vector(A.nrows, rng);
    std::vector<double> x_post = x_pre;
    l1_jacobi_sweeps(A, d, b, x_pre, 1);  // the pre-smoothing path
    l1_jacobi_sweeps(A, d, b, x_post, 1); // the transposed-smoother path
    CHECK(x_pre == x_post);
}

TEST_CASE("wcycle equals vcycle when nl <= 2") {
    const CsrMatrix A = gen_poisson_2d(8, 8); // n = 64
    SetupConfig setup;
    setup.coarse_factor = 9.0; // bound ~36: exactly one coarsening (64 -> 16)
    const Hierarchy h = build_hierarchy(A, setup);
    REQUIRE(h.nl() == 2);
    Rng rng(3);
    const std::vector<double> b = random_vector(A.nrows, rng);
    const std::vector<double> x0(A.nrows, 0.0);
    const std::vector<double> xv = vcycle(h, 0, b, x0, CycleConfig{});
    const std::vector<double> xw = wcycle(h, 0, b, x0, CycleConfig{});
    CHECK(rel_diff(xw, xv) <= 1e-15);
}

TEST_CASE("one V-cycle contracts the error in the A-norm (Poisson 32x32)") {
    const CsrMatrix A = gen_poisson_2d(32, 32);
    const Hierarchy h = build_hierarchy(A, SetupConfig{});
    REQUIRE(h.nl() >= 2);
    Rng rng(123);
    CycleConfig cfg;
    CycleWorkspace ws(h);
    for (int trial = 0; trial < 100; ++trial) {
        const std::vector<double> u_exact = random_vector(A.nrows, rng);
        const std::vector<double> b = spmv(A, u_exact);
        std::vector<double> x = random_vector(A.nrows, rng);
        std::vector<double> err(A.nrows);
        for (index_t i = 0; i < A.nrows; ++i) err[i] = u_exact[i] - x[i];
        const double before = a_norm(A, err);
        apply_cycle(h, 0, b, x, cfg, ws);
        for (index_t i = 0; i < A.nrows; ++i) err[i] = u_exact[i] - x[i];
        CHECK(a_norm(A, err) < before);
    }
}

TEST_CASE("W-cycle needs fewer PCG iterations than V on the anisotropic case") {
    const CsrMatrix A = gen_anisotropic_2d({64, 64, 0.001, 0.0});
    const Hierarchy h = build_hierarchy(A, SetupConfig{});
    const std::vector<double> b(A.nrows, 1.0);
    auto iterations = [&](CycleType type) {
        CycleConfig cfg;
        cfg.cycle = type;
        MultigridPreconditioner precond(h, cfg);
        auto [u, rep] = pcg_solve(
            A,
            [&precond](std::span<const double> r, std::span<double> z) {
                precond.apply(r, z);
            },
            b, SolveConfig{});
        REQUIRE(rep.converged);
        return rep.iterations;
    };
    CHECK(iterations(CycleType::W) <= iterations(CycleType::V));
}

TEST_CASE("cycle config validation") {
    CycleConfig bad;
    bad.coarsest_sweeps = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CycleConfig neg;
    neg.pre_sweeps = -1;
    CHECK_THROWS_AS(neg.validate(), std::invalid_argument);
}
