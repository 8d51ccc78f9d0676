#include "matchamg/vector_ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace matchamg {

namespace {

constexpr std::size_t kBlock = 2048;

// In-place pairwise combine of block partials; order fixed regardless of
// thread count.
double combine(std::vector<double>& partial) {
    if (partial.empty()) return 0.0;
    for (std::size_t m = partial.size(); m > 1; m = (m + 1) / 2) {
        const std::size_t half = m / 2;
        for (std::size_t i = 0; i < half; ++i)
            partial[i] = partial[2 * i] + partial[2 * i + 1];
        if (m % 2) partial[half] = partial[m - 1];
    }
    return partial[0];
}

} // namespace

double dot(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw std::invalid_argument("dot: length mismatch");
    const std::size_t n = x.size();
    const std::size_t nblocks = (n + kBlock - 1) / kBlock;
    std::vector<double> partial(nblocks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nblocks); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
        const std::size_t hi = std::min(lo + kBlock, n);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += x[i] * y[i];
        partial[b] = s;
    }
    return combine(partial);
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

void axpy(std::span<double> y, double a, std::span<const double> x) {
    if (x.size() != y.size())
        throw std::invalid_argument("axpy: length mismatch");
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(y.size()); ++i)
        y[i] += a * x[i];
}

TripleDot fused_triple_dot(std::span<const double> w, std::span<const double> r,
                           std::span<const double> v,
                           std::span<const double> q_prev) {
    const std::size_t n = w.size();
    if (r.size() != n || v.size() != n || q_prev.size() != n)
        throw std::invalid_argument("fused_triple_dot: length mismatch");
    const std::size_t nblocks = (n + kBlock - 1) / kBlock;
    std::vector<double> pr(nblocks, 0.0), pv(nblocks, 0.0), pq(nblocks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nblocks); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
        const std::size_t hi = std::min(lo + kBlock, n);
        double sr = 0.0, sv = 0.0, sq = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            const double wi = w[i];
            sr += wi * r[i];
            sv += wi * v[i];
            sq += wi * q_prev[i];
        }
        pr[b] = sr;
        pv[b] = sv;
        pq[b] = sq;
    }
    return TripleDot{combine(pr), combine(pv), combine(pq)};
}

void fused_axpy_pair(std::span<double> y1, std::span<double> y2,
                     std::span<const double> x, double a, double b) {
    if (y1.size() != y2.size() || y1.size() != x.size())
        throw std::invalid_argument("fused_axpy_pair: length mismatch");
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(y1.size()); ++i) {
        const double t = y1[i] + a * x[i];
        y1[i] = t;
        y2[i] += b * t;
    }
}

} // namespace matchamg
