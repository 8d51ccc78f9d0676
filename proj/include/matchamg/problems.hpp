/// @file problems.hpp
/// @brief Finite-difference / finite-volume test problem generators.

#ifndef MATCHAMG_PROBLEMS_HPP
#define MATCHAMG_PROBLEMS_HPP

#include <cstdint>

#include "matchamg/csr.hpp"

namespace matchamg {

/// Anisotropic diffusion -div(K grad u) = f on the unit square with
/// homogeneous Dirichlet conditions, K = [[a, c], [c, b]] built from the
/// anisotropy strength epsilon and direction theta:
///   a = epsilon + cos^2(theta), b = epsilon + sin^2(theta),
///   c = cos(theta) sin(theta).
struct AniSpec {
    index_t nx = 2;
    index_t ny = 2;
    double epsilon = 1.0; ///< in (0, 1]
    double theta = 0.0;   ///< radians
};

/// 9-point finite-difference stencil (5-point when theta = 0, where the
/// mixed term vanishes); the cross-derivative uses the 4-corner difference.
/// The assembly is symmetric bitwise.
CsrMatrix gen_anisotropic_2d(const AniSpec& spec);

/// Constant-coefficient 5-point Laplacian on the unit square (K = I).
CsrMatrix gen_poisson_2d(index_t nx, index_t ny);

/// 3D Poisson with a lognormal random permeability field, cell-centered
/// finite volumes on the unit cube, harmonic-mean face coefficients and
/// Dirichlet closure. sigma is the standard deviation of the (mean 1)
/// lognormal distribution; sigma = 0 gives the constant-coefficient 7-point
/// Laplacian. Deterministic for a fixed seed.
struct RandPermSpec {
    index_t nx = 2;
    index_t ny = 2;
    index_t nz = 2;
    double sigma = 1.0; ///< >= 0
    std::uint64_t seed = 0;
};

CsrMatrix gen_poisson_3d_randk(const RandPermSpec& spec);

} // namespace matchamg

#endif
