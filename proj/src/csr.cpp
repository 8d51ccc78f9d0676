#include "matchamg/csr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace matchamg {

const double* CsrMatrix::find_entry(index_t i, index_t j) const {
    const auto first = col_idx.begin() + row_ptr[i];
    const auto last = col_idx.begin() + row_ptr[i + 1];
    const auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return nullptr;
    return &values[static_cast<std::size_t>(it - col_idx.begin())];
}

void CsrMatrix::validate() const {
    if (nrows < 0 || ncols < 0)
        throw std::invalid_argument("CsrMatrix: negative dimension");
    if (static_cast<index_t>(row_ptr.size()) != nrows + 1)
        throw std::invalid_argument("CsrMatrix: row_ptr has " +
                                    std::to_string(row_ptr.size()) +
                                    " entries, expected nrows+1 = " +
                                    std::to_string(nrows + 1));
    if (row_ptr.front() != 0)
        throw std::invalid_argument("CsrMatrix: row_ptr[0] != 0");
    if (col_idx.size() != values.size())
        throw std::invalid_argument("CsrMatrix: col_idx/values size mismatch");
    if (row_ptr.back() != nnz())
        throw std::invalid_argument("CsrMatrix: row_ptr[nrows] != nnz");
    for (index_t i = 0; i < nrows; ++i) {
        if (row_ptr[i + 1] < row_ptr[i])
            throw std::invalid_argument("CsrMatrix: row_ptr decreases at row " +
                                        std::to_string(i));
        for (index_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
            if (col_idx[k] < 0 || col_idx[k] >= ncols)
                throw std::invalid_argument(
                    "CsrMatrix: column index out of range in row " +
                    std::to_string(i));
            if (k > row_ptr[i] && col_idx[k] <= col_idx[k - 1])
                throw std::invalid_argument(
                    "CsrMatrix: columns not strictly increasing in row " +
                    std::to_string(i));
        }
    }
}

CsrMatrix CsrMatrix::identity(index_t n) {
    CsrMatrix I;
    I.nrows = I.ncols = n;
    I.row_ptr.resize(n + 1);
    I.col_idx.resize(n);
    I.values.assign(n, 1.0);
    for (index_t i = 0; i <= n; ++i) I.row_ptr[i] = i;
    for (index_t i = 0; i < n; ++i) I.col_idx[i] = i;
    return I;
}

CsrMatrix CsrMatrix::from_triplets(index_t nrows, index_t ncols,
                                   std::vector<Triplet> triplets) {
    for (const Triplet& t : triplets) {
        if (t.row < 0 || t.row >= nrows || t.col < 0 || t.col >= ncols)
            throw std::invalid_argument(
                "from_triplets: entry (" + std::to_string(t.row) + ", " +
                std::to_string(t.col) + ") outside " + std::to_string(nrows) +
                "x" + std::to_string(ncols));
    }
    std::sort(triplets.begin(), triplets.end(),
              [](const Triplet& a, const Triplet& b) {
                  return a.row != b.row ? a.row < b.row : a.col < b.col;
              });

    CsrMatrix A;
    A.nrows = nrows;
    A.ncols = ncols;
    A.row_ptr.assign(nrows + 1, 0);
    A.col_idx.reserve(triplets.size());
    A.values.reserve(triplets.size());
    std::size_t k = 0;
    while (k < triplets.size()) {
        const index_t r = triplets[k].row;
        const index_t c = triplets[k].col;
        double v = triplets[k].value;
        while (k + 1 < triplets.size() && triplets[k + 1].row == r &&
               triplets[k + 1].col == c) {
            ++k;
            v += triplets[k].value;
        }
        A.col_idx.push_back(c);
        A.values.push_back(v);
        ++A.row_ptr[r + 1];
        ++k;
    }
    for (index_t i = 0; i < nrows; ++i) A.row_ptr[i + 1] += A.row_ptr[i];
    return A;
}

std::vector<double> diagonal(const CsrMatrix& A) {
    std::vector<double> d(A.nrows, 0.0);
    for (index_t i = 0; i < A.nrows; ++i)
        if (const double* v = A.find_entry(i, i)) d[i] = *v;
    return d;
}

bool has_symmetric_pattern(const CsrMatrix& A) {
    if (A.nrows != A.ncols) return false;
    for (index_t i = 0; i < A.nrows; ++i)
        for (index_t k = A.row_begin(i); k < A.row_end(i); ++k)
            if (!A.find_entry(A.col_idx[k], i)) return false;
    return true;
}

double symmetry_gap(const CsrMatrix& A) {
    double gap = 0.0;
    for (index_t i = 0; i < A.nrows; ++i)
        for (index_t k = A.row_begin(i); k < A.row_end(i); ++k) {
            const index_t j = A.col_idx[k];
            const double* m = A.find_entry(j, i);
            const double other = m ? *m : 0.0;
            gap = std::max(gap, std::abs(A.values[k] - other));
        }
    return gap;
}

double max_abs(const CsrMatrix& A) {
    double m = 0.0;
    for (double v : A.values) m = std::max(m, std::abs(v));
    return m;
}

} // namespace matchamg
