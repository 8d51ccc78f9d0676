/// @file csr.hpp
/// @brief Compressed sparse row matrix storage, the universal operand of the
///        solver stack (system matrices, prolongators, coarse operators).

#ifndef MATCHAMG_CSR_HPP
#define MATCHAMG_CSR_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace matchamg {

using index_t = std::int64_t;

/// One (row, col, value) entry used when assembling matrices.
struct Triplet {
    index_t row;
    index_t col;
    double value;
};

/// Sparse matrix in CSR format with owned storage.
///
/// Invariants (see validate()):
///  - row_ptr has nrows+1 entries, is non-decreasing, row_ptr[0] == 0 and
///    row_ptr[nrows] == nnz()
///  - column indices are strictly increasing within each row and < ncols
///  - no duplicate (row, col) pairs are stored
struct CsrMatrix {
    index_t nrows = 0;
    index_t ncols = 0;
    std::vector<index_t> row_ptr{0};
    std::vector<index_t> col_idx;
    std::vector<double> values;

    index_t nnz() const { return static_cast<index_t>(values.size()); }
    bool empty() const { return nrows == 0 && ncols == 0; }

    index_t row_begin(index_t i) const { return row_ptr[i]; }
    index_t row_end(index_t i) const { return row_ptr[i + 1]; }
    index_t row_nnz(index_t i) const { return row_ptr[i + 1] - row_ptr[i]; }

    /// Pointer to the stored value at (i, j), or nullptr if the entry is not
    /// part of the sparsity pattern. Binary search within the row.
    const double* find_entry(index_t i, index_t j) const;

    /// Throws std::invalid_argument describing the first violated invariant.
    void validate() const;

    static CsrMatrix identity(index_t n);

    /// Builds a CSR matrix from an unordered triplet list. Duplicate (row,
    /// col) pairs are summed. Out-of-range indices throw.
    static CsrMatrix from_triplets(index_t nrows, index_t ncols,
                                   std::vector<Triplet> triplets);
};

/// Diagonal of a square matrix; entries absent from the pattern are zero.
std::vector<double> diagonal(const CsrMatrix& A);

/// True when the sparsity pattern is structurally symmetric.
bool has_symmetric_pattern(const CsrMatrix& A);

/// max_{ij} |A_ij - A_ji| over the union pattern (0 for empty matrices).
double symmetry_gap(const CsrMatrix& A);

/// Largest absolute entry (0 for empty matrices).
double max_abs(const CsrMatrix& A);

} // namespace matchamg

#endif
