/// @file krylov.hpp
/// @brief Reordered flexible preconditioned conjugate gradient with fused
///        triple scalar products and paired AXPY updates.
///
/// The solver tolerates a preconditioner that varies between iterations
/// (e.g. a multigrid cycle with inexact inner solves): the new search
/// direction is explicitly A-orthogonalized against the previous one,
///
///     d_i = w_i - (w_i . q_{i-1}) / rho_{i-1} d_{i-1},   q = A d.
///
/// The residual recurrence subtracts (alpha_i / rho_i) q_i so that
/// r_i = b - A u_i holds; an audit every 50 iterations recomputes the
/// residual explicitly and verifies the recurrence to 1e-10 relative.

#ifndef MATCHAMG_KRYLOV_HPP
#define MATCHAMG_KRYLOV_HPP

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "matchamg/csr.hpp"
#include "matchamg/vector_ops.hpp"

namespace matchamg {

struct SolveConfig {
    double rtol = 1e-6;
    index_t itmax = 5000;

    void validate() const;
};

struct SolveReport {
    index_t iterations = 0;
    double final_relres = 0.0;
    std::vector<double> residual_history; ///< ||r_i||_2, length iterations+1
    bool converged = false;
    double setup_ms = 0.0; ///< filled by the caller that built the hierarchy
    double solve_ms = 0.0;

    // Residual-recurrence audit (certifies the sign convention).
    index_t audit_checks = 0;
    index_t audit_failures = 0;
    double audit_max_rel = 0.0;
};

/// rho_i <= 0 or a non-finite scalar: the operator or preconditioner is not
/// s.p.d. as far as the iteration can tell.
class BreakdownError : public std::runtime_error {
public:
    BreakdownError(index_t iteration, const std::string& what);
    index_t iteration() const { return iteration_; }

private:
    index_t iteration_;
};

/// Preconditioner action z = B(r). May vary between calls.
using PrecondFn = std::function<void(std::span<const double>, std::span<double>)>;

/// Solves A u = b. Passing an empty PrecondFn runs unpreconditioned CG.
/// Stops when ||r||_2 / ||b||_2 <= rtol or itmax is reached; a zero
/// right-hand side returns u = 0 immediately as converged.
std::pair<std::vector<double>, SolveReport>
pcg_solve(const CsrMatrix& A, const PrecondFn& B, std::span<const double> b,
          std::span<const double> u0, const SolveConfig& cfg);

/// Zero initial guess overload.
std::pair<std::vector<double>, SolveReport>
pcg_solve(const CsrMatrix& A, const PrecondFn& B, std::span<const double> b,
          const SolveConfig& cfg);

} // namespace matchamg

#endif
