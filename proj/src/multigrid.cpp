#include "matchamg/multigrid.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "matchamg/kernels.hpp"
#include "matchamg/vector_ops.hpp"

namespace matchamg {

void CycleConfig::validate() const {
    if (pre_sweeps < 0 || post_sweeps < 0)
        throw std::invalid_argument("CycleConfig: sweep counts must be >= 0");
    if (coarsest_sweeps < 1)
        throw std::invalid_argument("CycleConfig: coarsest_sweeps must be >= 1");
}

void l1_jacobi_sweeps(const CsrMatrix& A, std::span<const double> d,
                      std::span<const double> b, std::span<double> x, int k) {
    const index_t n = A.nrows;
    if (A.ncols != n || static_cast<index_t>(d.size()) != n ||
        static_cast<index_t>(b.size()) != n ||
        static_cast<index_t>(x.size()) != n)
        throw std::invalid_argument("l1_jacobi_sweeps: dimension mismatch");
    if (k <= 0) return;
    std::vector<double> Ax(n);
    const LaneGroupPolicy policy = LaneGroupPolicy::for_matrix(A);
    for (int sweep = 0; sweep < k; ++sweep) {
        spmv_into(A, x, Ax, policy);
#pragma omp parallel for schedule(static)
        for (index_t i = 0; i < n; ++i) x[i] += (b[i] - Ax[i]) / d[i];
    }
}

CycleWorkspace::CycleWorkspace(const Hierarchy& h) {
    const int nl = h.nl();
    scratch_.resize(nl);
    coarse_b_.resize(nl);
    coarse_x_.resize(nl);
    for (int k = 0; k < nl; ++k) {
        scratch_[k].resize(h.levels[k].A.nrows);
        if (k + 1 < nl) {
            coarse_b_[k].resize(h.levels[k + 1].A.nrows);
            coarse_x_[k].resize(h.levels[k + 1].A.nrows);
        }
    }
}

namespace {

void smooth(const Level& lvl, std::span<const double> b, std::span<double> x,
            int sweeps, std::vector<double>& Ax) {
    const LaneGroupPolicy policy = LaneGroupPolicy::for_matrix(lvl.A);
    for (int s = 0; s < sweeps; ++s) {
        spmv_into(lvl.A, x, Ax, policy);
#pragma omp parallel for schedule(static)
        for (index_t i = 0; i < lvl.A.nrows; ++i)
            x[i] += (b[i] - Ax[i]) / lvl.l1_diag[i];
    }
}

} // namespace

void apply_cycle(const Hierarchy& h, int level, std::span<const double> b,
                 std::span<double> x, const CycleConfig& cfg,
                 CycleWorkspace& ws) {
    const int nl = h.nl();
    if (level < 0 || level >= nl)
        throw std::invalid_argument("apply_cycle: level " +
                                    std::to_string(level) + " outside [0, " +
                                    std::to_string(nl) + ")");
    const Level& lvl = h.levels[level];
    const index_t n = lvl.A.nrows;
    if (static_cast<index_t>(b.size()) != n ||
        static_cast<index_t>(x.size()) != n)
        throw std::invalid_argument("apply_cycle: dimension mismatch at level " +
                                    std::to_string(level));

    std::vector<double>& r = ws.scratch(level);

    if (level == nl - 1) {
        // coarsest solve: fixed sweep count from the zero vector, so the
        // operation is a fixed polynomial in A and stays symmetric
        std::fill(x.begin(), x.end(), 0.0);
        smooth(lvl, b, x, cfg.coarsest_sweeps, r);
        return;
    }

    smooth(lvl, b, x, cfg.pre_sweeps, r);

    // restrict the freshly computed residual
    spmv_into(lvl.A, x, r, LaneGroupPolicy::for_matrix(lvl.A));
#pragma omp parallel for schedule(static)
    for (index_t i = 0; i < n; ++i) r[i] = b[i] - r[i];

    std::vector<double>& bc = ws.coarse_b(level);
    std::vector<double>& xc = ws.coarse_x(level);
    spmv_into(lvl.R, r, bc);
    std::fill(xc.begin(), xc.end(), 0.0);
    const int visits = cfg.cycle == CycleType::W ? 2 : 1;
    for (int t = 0; t < visits; ++t) apply_cycle(h, level + 1, bc, xc, cfg, ws);

    // prolongate and correct
    spmv_into(lvl.P, xc, r, LaneGroupPolicy::for_matrix(lvl.P));
    axpy(x, 1.0, r);

    smooth(lvl, b, x, cfg.post_sweeps, r);
}

namespace {

std::vector<double> run_cycle(const Hierarchy& h, int level,
                              std::span<const double> b,
                              std::span<const double> x0, CycleConfig cfg,
                              CycleType type) {
    cfg.cycle = type;
    cfg.validate();
    std::vector<double> x(x0.begin(), x0.end());
    CycleWorkspace ws(h);
    apply_cycle(h, level, b, x, cfg, ws);
    return x;
}

} // namespace

std::vector<double> vcycle(const Hierarchy& h, int level,
                           std::span<const double> b,
                           std::span<const double> x0, CycleConfig cfg) {
    return run_cycle(h, level, b, x0, cfg, CycleType::V);
}

std::vector<double> wcycle(const Hierarchy& h, int level,
                           std::span<const double> b,
                           std::span<const double> x0, CycleConfig cfg) {
    return run_cycle(h, level, b, x0, cfg, CycleType::W);
}

MultigridPreconditioner::MultigridPreconditioner(const Hierarchy& h,
                                                 CycleConfig cfg)
    : h_(&h), cfg_(cfg), ws_(h) {
    cfg.validate();
}

void MultigridPreconditioner::apply(std::span<const double> r,
                                    std::span<double> z) {
    std::fill(z.begin(), z.end(), 0.0);
    apply_cycle(*h_, 0, r, z, cfg_, ws_);
}

} // namespace matchamg
