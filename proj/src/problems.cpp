#include "matchamg/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace matchamg {

namespace {

/// Assembles the 9-point stencil of -div(K grad u) on the interior of the
/// unit square, K = [[a, c], [c, b]] constant, homogeneous Dirichlet.
CsrMatrix assemble_aniso_stencil(index_t nx, index_t ny, double a, double b,
                                 double c) {
    if (nx < 2 || ny < 2)
        throw std::invalid_argument("grid must be at least 2x2");
    const double hx = 1.0 / static_cast<double>(nx + 1);
    const double hy = 1.0 / static_cast<double>(ny + 1);
    const double wx = -a / (hx * hx);
    const double wy = -b / (hy * hy);
    const double wd = -2.0 * c / (4.0 * hx * hy); // corner weight, sign per quadrant
    const double center = 2.0 * a / (hx * hx) + 2.0 * b / (hy * hy);

    CsrMatrix A;
    A.nrows = A.ncols = nx * ny;
    A.row_ptr.reserve(A.nrows + 1);
    A.row_ptr.assign(1, 0);
    A.col_idx.reserve(9 * A.nrows);
    A.values.reserve(9 * A.nrows);

    for (index_t j = 0; j < ny; ++j)
        for (index_t i = 0; i < nx; ++i) {
            auto emit = [&](index_t di, index_t dj, double v) {
                const index_t ii = i + di;
                const index_t jj = j + dj;
                if (v == 0.0 || ii < 0 || ii >= nx || jj < 0 || jj >= ny)
                    return;
                A.col_idx.push_back(jj * nx + ii);
                A.values.push_back(v);
            };
            // ascending column order: dj = -1, 0, +1 and di = -1, 0, +1
            emit(-1, -1, wd);
            emit(0, -1, wy);
            emit(+1, -1, -wd);
            emit(-1, 0, wx);
            emit(0, 0, center);
            emit(+1, 0, wx);
            emit(-1, +1, -wd);
            emit(0, +1, wy);
            emit(+1, +1, wd);
            A.row_ptr.push_back(A.nnz());
        }
    return A;
}

} // namespace

CsrMatrix gen_anisotropic_2d(const AniSpec& spec) {
    if (!(spec.epsilon > 0.0))
        throw std::invalid_argument("gen_anisotropic_2d: epsilon must be > 0");
    const double ct = std::cos(spec.theta);
    const double st = std::sin(spec.theta);
    return assemble_aniso_stencil(spec.nx, spec.ny, spec.epsilon + ct * ct,
                                  spec.epsilon + st * st, ct * st);
}

CsrMatrix gen_poisson_2d(index_t nx, index_t ny) {
    return assemble_aniso_stencil(nx, ny, 1.0, 1.0, 0.0);
}

namespace {

/// Fully specified normal deviates: 64-bit xoshiro-free approach using
/// splitmix-seeded mt19937_64 and the Box-Muller transform on 53-bit
/// uniforms, so fixed seeds reproduce the field on any platform.
class NormalSource {
public:
    explicit NormalSource(std::uint64_t seed) : state_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 == 0.0) u1 = uniform();
        const double u2 = uniform();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * std::numbers::pi * u2;
        spare_ = mag * std::sin(ang);
        have_spare_ = true;
        return mag * std::cos(ang);
    }

private:
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    std::uint64_t next_u64() {
        // splitmix64
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace

CsrMatrix gen_poisson_3d_randk(const RandPermSpec& spec) {
    const index_t nx = spec.nx, ny = spec.ny, nz = spec.nz;
    if (nx < 2 || ny < 2 || nz < 2)
        throw std::invalid_argument("gen_poisson_3d_randk: grid must be >= 2^3");
    if (spec.sigma < 0.0)
        throw std::invalid_argument("gen_poisson_3d_randk: sigma must be >= 0");

    // lognormal with mean 1 and standard deviation sigma:
    // ln K ~ N(-s^2/2, s^2) with s^2 = ln(1 + sigma^2)
    const double s2 = std::log1p(spec.sigma * spec.sigma);
    const double s = std::sqrt(s2);
    const double mu = -0.5 * s2;

    const index_t n = nx * ny * nz;
    std::vector<double> K(n);
    NormalSource rng(spec.seed);
    for (index_t c = 0; c < n; ++c) K[c] = std::exp(mu + s * rng.next());

    const double hx = 1.0 / static_cast<double>(nx);
    const double hy = 1.0 / static_cast<double>(ny);
    const double hz = 1.0 / static_cast<double>(nz);
    auto cell = [&](index_t i, index_t j, index_t k) {
        return (k * ny + j) * nx + i;
    };
    // harmonic mean of the two cell permeabilities over the face
    auto trans = [](double k1, double k2, double h) {
        return 2.0 / (1.0 / k1 + 1.0 / k2) / (h * h);
    };

    CsrMatrix A;
    A.nrows = A.ncols = n;
    A.row_ptr.assign(1, 0);
    A.col_idx.reserve(7 * n);
    A.values.reserve(7 * n);

    for (index_t k = 0; k < nz; ++k)
        for (index_t j = 0; j < ny; ++j)
            for (index_t i = 0; i < nx; ++i) {
                const index_t row = cell(i, j, k);
                const double kc = K[row];
                double diag = 0.0;
                double off[6] = {};
                index_t col[6] = {};
                int m = 0;
                auto face = [&](bool interior, index_t nbr, double h) {
                    if (interior) {
                        const double t = trans(kc, K[nbr], h);
                        off[m] = -t;
                        col[m] = nbr;
                        ++m;
                        diag += t;
                    } else {
                        // Dirichlet closure: boundary face at distance h/2
                        diag += 2.0 * kc / (h * h);
                    }
                };
                // ascending column order
                face(k > 0, row - nx * ny, hz);
                face(j > 0, row - nx, hy);
                face(i > 0, row - 1, hx);
                const int before = m;
                face(i + 1 < nx, row + 1, hx);
                face(j + 1 < ny, row + nx, hy);
                face(k + 1 < nz, row + nx * ny, hz);

                for (int t = 0; t < before; ++t) {
                    A.col_idx.push_back(col[t]);
                    A.values.push_back(off[t]);
                }
                A.col_idx.push_back(row);
                A.values.push_back(diag);
                for (int t = before; t < m; ++t) {
                    A.col_idx.push_back(col[t]);
                    A.values.push_back(off[t]);
                }
                A.row_ptr.push_back(A.nnz());
            }
    return A;
}

} // namespace matchamg
