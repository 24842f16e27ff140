#ifndef MLNS_MATRIX_MARKET_HPP
#define MLNS_MATRIX_MARKET_HPP

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlns/csr.hpp"
#include "mlns/dense.hpp"
#include "mlns/scalar.hpp"

namespace mlns {

struct MatrixMarketError : std::runtime_error {
  explicit MatrixMarketError(const std::string& what)
      : std::runtime_error("matrix market: " + what) {}
};

enum class MmField { real, complex_ };
enum class MmSymmetry { general, symmetric, hermitian, skew_symmetric };

struct MmHeader {
  bool coordinate = true;
  MmField field = MmField::real;
  MmSymmetry symmetry = MmSymmetry::general;
};

namespace detail {

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

inline MmHeader parse_banner(const std::string& line) {
  std::istringstream iss(line);
  std::string tag, object, format, field, symmetry;
  iss >> tag >> object >> format >> field >> symmetry;
  if (lower(tag) != "%%matrixmarket")
    throw MatrixMarketError("malformed banner: " + line);
  if (lower(object) != "matrix")
    throw MatrixMarketError("unsupported object: " + object);
  MmHeader h;
  const std::string fmt = lower(format);
  if (fmt == "coordinate")
    h.coordinate = true;
  else if (fmt == "array")
    h.coordinate = false;
  else
    throw MatrixMarketError("unsupported format: " + format);
  const std::string fld = lower(field);
  if (fld == "real")
    h.field = MmField::real;
  else if (fld == "complex")
    h.field = MmField::complex_;
  else
    throw MatrixMarketError("unsupported field qualifier: " + field);
  const std::string sym = lower(symmetry);
  if (sym == "general")
    h.symmetry = MmSymmetry::general;
  else if (sym == "symmetric")
    h.symmetry = MmSymmetry::symmetric;
  else if (sym == "hermitian")
    h.symmetry = MmSymmetry::hermitian;
  else if (sym == "skew-symmetric")
    h.symmetry = MmSymmetry::skew_symmetric;
  else
    throw MatrixMarketError("unsupported symmetry qualifier: " + symmetry);
  return h;
}

inline std::ifstream open_mm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MatrixMarketError("cannot open file: " + path);
  return in;
}

inline MmHeader read_header(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw MatrixMarketError("empty file");
  return parse_banner(line);
}

/// Skips comment lines (starting with '%') and blank lines, returning the
/// next content line.
inline bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    std::size_t p = line.find_first_not_of(" \t\r");
    if (p == std::string::npos) continue;
    if (line[p] == '%') continue;
    return true;
  }
  return false;
}

template <Scalar S>
S parse_value(std::istringstream& iss, MmField field) {
  if (field == MmField::complex_) {
    double re = 0, im = 0;
    if (!(iss >> re >> im)) throw MatrixMarketError("bad complex value");
    if constexpr (is_complex_v<S>)
      return S{re, im};
    else
      throw MatrixMarketError(
          "complex-valued file cannot be read into a real matrix");
  } else {
    double re = 0;
    if (!(iss >> re)) throw MatrixMarketError("bad real value");
    return S{re};
  }
}

}  // namespace detail

/// Reports whether a Matrix Market file holds real or complex data, so
/// callers can pick the scalar type before reading.
inline MmField peek_matrix_market_field(const std::string& path) {
  auto in = detail::open_mm(path);
  return detail::read_header(in).field;
}

/// Reads a coordinate-format Matrix Market matrix. Symmetric, Hermitian and
/// skew-symmetric files are expanded to full general storage; duplicate
/// entries are summed. Pattern files are rejected. A real file may be read
/// into a complex matrix, never the reverse.
template <Scalar S>
CsrMatrix<S> read_matrix_market(const std::string& path) {
  auto in = detail::open_mm(path);
  const MmHeader h = detail::read_header(in);
  if (!h.coordinate)
    throw MatrixMarketError("expected coordinate format: " + path);

  std::string line;
  if (!detail::next_content_line(in, line))
    throw MatrixMarketError("missing size line");
  std::istringstream size_iss(line);
  std::size_t nrows = 0, ncols = 0, nnz = 0;
  if (!(size_iss >> nrows >> ncols >> nnz))
    throw MatrixMarketError("bad size line: " + line);

  std::vector<Triplet<S>> entries;
  entries.reserve(h.symmetry == MmSymmetry::general ? nnz : 2 * nnz);
  for (std::size_t e = 0; e < nnz; ++e) {
    if (!detail::next_content_line(in, line))
      throw MatrixMarketError("unexpected end of file in entry list");
    std::istringstream iss(line);
    std::size_t i = 0, j = 0;
    if (!(iss >> i >> j)) throw MatrixMarketError("bad entry line: " + line);
    if (i < 1 || i > nrows || j < 1 || j > ncols)
      throw MatrixMarketError("entry index out of declared bounds: " + line);
    const S v = detail::parse_value<S>(iss, h.field);
    entries.push_back({i - 1, j - 1, v});
    if (i != j) {
      switch (h.symmetry) {
        case MmSymmetry::general:
          break;
        case MmSymmetry::symmetric:
          entries.push_back({j - 1, i - 1, v});
          break;
        case MmSymmetry::hermitian:
          entries.push_back({j - 1, i - 1, conj(v)});
          break;
        case MmSymmetry::skew_symmetric:
          entries.push_back({j - 1, i - 1, S{} - v});
          break;
      }
    }
  }
  return csr_from_triplets<S>(nrows, ncols, std::move(entries));
}

/// Reads an array-format Matrix Market file holding a single column,
/// typically a right-hand side accompanying a coordinate matrix file.
template <Scalar S>
DenseVector<S> read_vector_market(const std::string& path) {
  auto in = detail::open_mm(path);
  const MmHeader h = detail::read_header(in);
  if (h.coordinate)
    throw MatrixMarketError("expected array format for vector: " + path);
  if (h.symmetry != MmSymmetry::general)
    throw MatrixMarketError("vector files must be general");

  std::string line;
  if (!detail::next_content_line(in, line))
    throw MatrixMarketError("missing size line");
  std::istringstream size_iss(line);
  std::size_t nrows = 0, ncols = 0;
  if (!(size_iss >> nrows >> ncols))
    throw MatrixMarketError("bad size line: " + line);
  if (ncols != 1)
    throw MatrixMarketError("expected a single-column vector file");

  DenseVector<S> v(nrows);
  for (std::size_t i = 0; i < nrows; ++i) {
    if (!detail::next_content_line(in, line))
      throw MatrixMarketError("unexpected end of file in vector data");
    std::istringstream iss(line);
    v[i] = detail::parse_value<S>(iss, h.field);
  }
  return v;
}

namespace detail {
inline void write_value(std::FILE* f, double x) {
  std::fprintf(f, " %.16e", x);
}
inline void write_value(std::FILE* f, const std::complex<double>& z) {
  std::fprintf(f, " %.16e %.16e", z.real(), z.imag());
}
}  // namespace detail

/// Writes coordinate general format with 1-based indices and 17 significant
/// digits, enough for an exact double round trip. Explicit stored zeros are
/// preserved.
template <Scalar S>
void write_matrix_market(const std::string& path, const CsrMatrix<S>& A) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw MatrixMarketError("cannot open file for writing: " + path);
  std::fprintf(f, "%%%%MatrixMarket matrix coordinate %s general\n",
               is_complex_v<S> ? "complex" : "real");
  std::fprintf(f, "%zu %zu %zu\n", A.nrows, A.ncols, A.nnz());
  for (std::size_t i = 0; i < A.nrows; ++i)
    for (std::size_t k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) {
      std::fprintf(f, "%zu %zu", i + 1, A.col_idx[k] + 1);
      detail::write_value(f, A.values[k]);
      std::fputc('\n', f);
    }
  if (std::fclose(f) != 0)
    throw MatrixMarketError("write failure on: " + path);
}

}  // namespace mlns

#endif  // MLNS_MATRIX_MARKET_HPP
