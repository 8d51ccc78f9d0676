#include "matchamg/matching.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace matchamg {

index_t Matching::matched_vertices() const {
    index_t count = 0;
    for (index_t m : mate)
        if (m != kUnmatched) ++count;
    return count;
}

bool Matching::is_valid() const {
    const index_t n = static_cast<index_t>(mate.size());
    for (index_t i = 0; i < n; ++i) {
        const index_t j = mate[i];
        if (j == kUnmatched) continue;
        if (j < 0 || j >= n || j == i || mate[j] != i) return false;
    }
    return true;
}

WeightedGraph build_weights(const CsrMatrix& A, std::span<const double> w) {
    if (A.nrows != A.ncols)
        throw std::invalid_argument("build_weights: matrix is not square");
    if (static_cast<index_t>(w.size()) != A.nrows)
        throw std::invalid_argument("build_weights: w length mismatch");
    const index_t n = A.nrows;

    const std::vector<double> diag = diagonal(A);
    for (index_t i = 0; i < n; ++i)
        if (!(diag[i] > 0.0))
            throw std::invalid_argument(
                "build_weights: non-positive diagonal in row " +
                std::to_string(i));

    WeightedGraph G;
    G.n = n;
    G.xadj.assign(n + 1, 0);
    for (index_t i = 0; i < n; ++i) {
        index_t deg = A.row_nnz(i);
        if (A.find_entry(i, i)) --deg;
        G.xadj[i + 1] = deg;
    }
    for (index_t i = 0; i < n; ++i) G.xadj[i + 1] += G.xadj[i];
    G.adjncy.resize(G.xadj[n]);
    G.weight.resize(G.xadj[n]);

    long zero_edges = 0;
    index_t bad_pattern_row = -1;
    index_t bad_weight_row = -1;
#pragma omp parallel for schedule(static) reduction(+ : zero_edges)
    for (index_t i = 0; i < n; ++i) {
        index_t pos = G.xadj[i];
        for (index_t k = A.row_begin(i); k < A.row_end(i); ++k) {
            const index_t j = A.col_idx[k];
            if (j == i) continue;
            if (!A.find_entry(j, i)) {
#pragma omp critical
                bad_pattern_row = i;
                break;
            }
            // always evaluate from the upper-triangle entry so both
            // directions of the edge get a bitwise identical weight
            const index_t p = std::min(i, j);
            const index_t q = std::max(i, j);
            const double* entry = A.find_entry(p, q);
            const double den = diag[p] * w[p] * w[p] + diag[q] * w[q] * w[q];
            double c;
            if (den == 0.0) {
                c = 0.0;
                if (i < j) ++zero_edges; // count each undirected edge once
            } else {
                c = 1.0 - 2.0 * (*entry) * w[p] * w[q] / den;
            }
            if (!std::isfinite(c)) {
#pragma omp critical
                bad_weight_row = i;
                break;
            }
            G.adjncy[pos] = j;
            G.weight[pos] = c;
            ++pos;
        }
    }
    if (bad_pattern_row >= 0)
        throw std::invalid_argument(
            "build_weights: pattern not symmetric, offending row " +
            std::to_string(bad_pattern_row));
    if (bad_weight_row >= 0)
        throw std::invalid_argument(
            "build_weights: non-finite weight produced in row " +
            std::to_string(bad_weight_row));
    G.zero_weight_edges = zero_edges;
    return G;
}

namespace {

/// Strict total order on edges: weight first, then the lexicographically
/// smaller endpoint pair. Making the order total keeps the Suitor result
/// deterministic and equal to greedy matching on the sorted edge list.
bool edge_beats(index_t u1, double c1, index_t u2, double c2, index_t v) {
    if (c1 != c2) return c1 > c2;
    const auto a = std::minmax(u1, v);
    const auto b = std::minmax(u2, v);
    return a < b;
}

} // namespace

Matching suitor_match(const WeightedGraph& G) {
    const index_t n = G.n;
    std::vector<index_t> suitor(n, kUnmatched);
    std::vector<double> suitor_weight(n, 0.0);

    for (index_t start = 0; start < n; ++start) {
        index_t current = start;
        while (true) {
            index_t best = kUnmatched;
            double best_w = 0.0;
            for (index_t k = G.xadj[current]; k < G.xadj[current + 1]; ++k) {
                const index_t v = G.adjncy[k];
                const double c = G.weight[k];
                if (c < 0.0) continue; // a negative edge never improves a matching
                if (suitor[v] != kUnmatched &&
                    !edge_beats(current, c, suitor[v], suitor_weight[v], v))
                    continue;
                if (best == kUnmatched ||
                    edge_beats(v, c, best, best_w, current))
                    best = v, best_w = c;
            }
            if (best == kUnmatched) break;
            const index_t dislodged = suitor[best];
            suitor[best] = current;
            suitor_weight[best] = best_w;
            if (dislodged == kUnmatched) break;
            current = dislodged; // re-propose for the dislodged vertex
        }
    }

    Matching M;
    M.mate.assign(n, kUnmatched);
    for (index_t v = 0; v < n; ++v) {
        const index_t u = suitor[v];
        if (u != kUnmatched && suitor[u] == v) M.mate[v] = u;
    }
    return M;
}

Matching exact_match_oracle(const WeightedGraph& G) {
    const index_t n = G.n;
    if (n > 20)
        throw std::invalid_argument(
            "exact_match_oracle: n = " + std::to_string(n) +
            " exceeds the exhaustive-search limit of 20");

    // dense weight lookup; absent edges marked
    std::vector<double> W(n * n, 0.0);
    std::vector<char> has(n * n, 0);
    for (index_t u = 0; u < n; ++u)
        for (index_t k = G.xadj[u]; k < G.xadj[u + 1]; ++k) {
            W[u * n + G.adjncy[k]] = G.weight[k];
            has[u * n + G.adjncy[k]] = 1;
        }

    const std::size_t nmask = std::size_t{1} << n;
    std::vector<double> best(nmask, 0.0);
    std::vector<index_t> choice(nmask, kUnmatched);
    for (std::size_t mask = 1; mask < nmask; ++mask) {
        int i = 0;
        while (!(mask >> i & 1)) ++i;
        const std::size_t rest = mask & ~(std::size_t{1} << i);
        double b = best[rest]; // leave i unmatched
        index_t pick = kUnmatched;
        for (index_t j = i + 1; j < n; ++j) {
            if (!(mask >> j & 1) || !has[i * n + j]) continue;
            const double cand =
                W[i * n + j] + best[rest & ~(std::size_t{1} << j)];
            if (cand > b) {
                b = cand;
                pick = j;
            }
        }
        best[mask] = b;
        choice[mask] = pick;
    }

    Matching M;
    M.mate.assign(n, kUnmatched);
    std::size_t mask = nmask - 1;
    while (mask) {
        int i = 0;
        while (!(mask >> i & 1)) ++i;
        const index_t j = choice[mask];
        mask &= ~(std::size_t{1} << i);
        if (j != kUnmatched) {
            M.mate[i] = j;
            M.mate[j] = i;
            mask &= ~(std::size_t{1} << j);
        }
    }
    return M;
}

double matching_weight(const WeightedGraph& G, const Matching& M) {
    double total = 0.0;
    for (index_t u = 0; u < G.n; ++u) {
        const index_t v = M.mate[u];
        if (v == kUnmatched || v < u) continue;
        for (index_t k = G.xadj[u]; k < G.xadj[u + 1]; ++k)
            if (G.adjncy[k] == v) {
                total += G.weight[k];
                break;
            }
    }
    return total;
}

} // namespace matchamg
