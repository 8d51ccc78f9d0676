#include "matchamg/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace matchamg {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

[[noreturn]] void fail(const std::string& path, long line,
                       const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

} // namespace

CsrMatrix read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open matrix file: " + path);

    long line_no = 0;
    std::string line;
    if (!std::getline(in, line)) fail(path, 1, "empty file");
    ++line_no;

    std::istringstream banner(line);
    std::string tag, object, format, field, qualifier;
    banner >> tag >> object >> format >> field >> qualifier;
    if (lower(tag) != "%%matrixmarket")
        fail(path, line_no, "missing %%MatrixMarket banner");
    if (lower(object) != "matrix" || lower(format) != "coordinate")
        fail(path, line_no, "only `matrix coordinate` files are supported");
    if (lower(field) != "real")
        fail(path, line_no, "unsupported field `" + field + "` (want real)");
    const std::string sym = lower(qualifier);
    if (sym != "general" && sym != "symmetric")
        fail(path, line_no,
             "unsupported qualifier `" + qualifier + "` (want general or symmetric)");
    const bool symmetric = sym == "symmetric";

    index_t nrows = 0, ncols = 0;
    long declared_nnz = -1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '%') continue;
        std::istringstream sizes(line);
        if (!(sizes >> nrows >> ncols >> declared_nnz))
            fail(path, line_no, "malformed size line");
        break;
    }
    if (declared_nnz < 0) fail(path, line_no, "missing size line");
    if (nrows < 0 || ncols < 0)
        fail(path, line_no, "negative matrix dimension");

    std::vector<Triplet> entries;
    entries.reserve(symmetric ? 2 * declared_nnz : declared_nnz);
    long seen = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '%') continue;
        std::istringstream entry(line);
        index_t i, j;
        double v;
        if (!(entry >> i >> j >> v))
            fail(path, line_no, "malformed entry line");
        if (i < 1 || i > nrows || j < 1 || j > ncols)
            fail(path, line_no,
                 "index (" + std::to_string(i) + ", " + std::to_string(j) +
                     ") outside " + std::to_string(nrows) + "x" +
                     std::to_string(ncols));
        entries.push_back({i - 1, j - 1, v});
        if (symmetric && i != j) entries.push_back({j - 1, i - 1, v});
        ++seen;
    }
    if (seen != declared_nnz)
        fail(path, line_no,
             "entry count " + std::to_string(seen) + " does not match header (" +
                 std::to_string(declared_nnz) + ")");

    return CsrMatrix::from_triplets(nrows, ncols, std::move(entries));
}

void write_matrix_market(const CsrMatrix& A, const std::string& path,
                         bool symmetric) {
    if (symmetric && !has_symmetric_pattern(A))
        throw std::invalid_argument(
            "write_matrix_market: symmetric output of a matrix with an "
            "asymmetric pattern");

    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f)
        throw std::runtime_error("cannot open file for writing: " + path);

    index_t count = 0;
    if (symmetric) {
        for (index_t i = 0; i < A.nrows; ++i)
            for (index_t k = A.row_begin(i); k < A.row_end(i); ++k)
                if (A.col_idx[k] <= i) ++count;
    } else {
        count = A.nnz();
    }

    std::fprintf(f, "%%%%MatrixMarket matrix coordinate real %s\n",
                 symmetric ? "symmetric" : "general");
    std::fprintf(f, "%lld %lld %lld\n", static_cast<long long>(A.nrows),
                 static_cast<long long>(A.ncols),
                 static_cast<long long>(count));
    for (index_t i = 0; i < A.nrows; ++i)
        for (index_t k = A.row_begin(i); k < A.row_end(i); ++k) {
            const index_t j = A.col_idx[k];
            if (symmetric && j > i) continue;
            std::fprintf(f, "%lld %lld %.16e\n", static_cast<long long>(i + 1),
                         static_cast<long long>(j + 1), A.values[k]);
        }
    std::fclose(f);
}

} // namespace matchamg
