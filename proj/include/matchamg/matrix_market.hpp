/// @file matrix_market.hpp
/// @brief MatrixMarket coordinate-format reader and writer.

#ifndef MATCHAMG_MATRIX_MARKET_HPP
#define MATCHAMG_MATRIX_MARKET_HPP

#include <string>

#include "matchamg/csr.hpp"

namespace matchamg {

/// Reads a real coordinate-format file (general or symmetric qualifier).
/// Symmetric storage is expanded to the full pattern, indices are converted
/// to 0-based, duplicates are summed. Malformed input throws
/// std::runtime_error naming the file and line.
CsrMatrix read_matrix_market(const std::string& path);

/// Writes coordinate format with 17 significant digits (%.16e), which
/// round-trips doubles exactly. With symmetric = true only the lower
/// triangle is stored under the `symmetric` qualifier; the matrix must have
/// a symmetric pattern in that case.
void write_matrix_market(const CsrMatrix& A, const std::string& path,
                         bool symmetric = false);

} // namespace matchamg

#endif
