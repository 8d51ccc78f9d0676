/// @file multigrid.hpp
/// @brief Hierarchy application: l1-Jacobi smoothing and the symmetric V/W
///        multigrid cycles used as the preconditioner.

#ifndef MATCHAMG_MULTIGRID_HPP
#define MATCHAMG_MULTIGRID_HPP

#include <span>
#include <vector>

#include "matchamg/coarsening.hpp"

namespace matchamg {

enum class CycleType { V, W };

struct CycleConfig {
    CycleType cycle = CycleType::V;
    int pre_sweeps = 1;
    int post_sweeps = 1;
    int coarsest_sweeps = 20;

    void validate() const;
};

/// k sweeps of x <- x + D_l1^{-1} (b - A x) with d = l1_diagonal(A).
/// Convergent for s.p.d. A without a damping parameter.
void l1_jacobi_sweeps(const CsrMatrix& A, std::span<const double> d,
                      std::span<const double> b, std::span<double> x, int k);

/// Preallocated per-level work vectors; one instance per solver thread.
class CycleWorkspace {
public:
    CycleWorkspace() = default;
    explicit CycleWorkspace(const Hierarchy& h);

    std::vector<double>& scratch(int level) { return scratch_[level]; }
    std::vector<double>& coarse_b(int level) { return coarse_b_[level]; }
    std::vector<double>& coarse_x(int level) { return coarse_x_[level]; }

private:
    std::vector<std::vector<double>> scratch_;  ///< size n_k
    std::vector<std::vector<double>> coarse_b_; ///< size n_{k+1}
    std::vector<std::vector<double>> coarse_x_; ///< size n_{k+1}
};

/// One multigrid cycle at `level`, updating x in place: pre-smooth, restrict
/// the freshly computed residual, recurse with zero initial guess (once for
/// V, twice for W), prolongate-correct, post-smooth. On the coarsest level x
/// is overwritten by coarsest_sweeps l1-Jacobi sweeps from the zero vector.
void apply_cycle(const Hierarchy& h, int level, std::span<const double> b,
                 std::span<double> x, const CycleConfig& cfg,
                 CycleWorkspace& ws);

/// Out-of-place convenience wrappers allocating a workspace per call.
std::vector<double> vcycle(const Hierarchy& h, int level,
                           std::span<const double> b,
                           std::span<const double> x0, CycleConfig cfg);
std::vector<double> wcycle(const Hierarchy& h, int level,
                           std::span<const double> b,
                           std::span<const double> x0, CycleConfig cfg);

/// Cycle application with zero initial guess, shaped for use as the
/// preconditioner action inside the Krylov solver. Owns its workspace;
/// composes with a shared read-only Hierarchy.
class MultigridPreconditioner {
public:
    MultigridPreconditioner(const Hierarchy& h, CycleConfig cfg);

    /// z = B(r): one cycle on A^1 z = r starting from z = 0.
    void apply(std::span<const double> r, std::span<double> z);

private:
    const Hierarchy* h_;
    CycleConfig cfg_;
    CycleWorkspace ws_;
};

} // namespace matchamg

#endif
