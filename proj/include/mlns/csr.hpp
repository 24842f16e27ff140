#ifndef MLNS_CSR_HPP
#define MLNS_CSR_HPP

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "mlns/counters.hpp"
#include "mlns/dense.hpp"
#include "mlns/scalar.hpp"

namespace mlns {

/// Compressed sparse row matrix. Within each row the column indices are
/// strictly increasing; explicitly stored zeros are kept.
template <Scalar S>
struct CsrMatrix {
  std::size_t nrows = 0;
  std::size_t ncols = 0;
  std::vector<std::size_t> row_ptr;  // size nrows+1, row_ptr[0] == 0
  std::vector<std::size_t> col_idx;  // size nnz
  std::vector<S> values;             // size nnz

  std::size_t nnz() const { return values.size(); }
  bool square() const { return nrows == ncols; }

  friend bool operator==(const CsrMatrix&, const CsrMatrix&) = default;
};

template <Scalar S>
struct Triplet {
  std::size_t row;
  std::size_t col;
  S value;
};

/// Builds a CSR matrix from coordinate entries. Duplicate coordinates are
/// summed; out-of-range indices are rejected.
template <Scalar S>
CsrMatrix<S> csr_from_triplets(std::size_t nrows, std::size_t ncols,
                               std::vector<Triplet<S>> entries) {
  for (const auto& t : entries)
    if (t.row >= nrows || t.col >= ncols)
      throw std::out_of_range("triplet index outside matrix dimensions");
  std::sort(entries.begin(), entries.end(),
            [](const Triplet<S>& a, const Triplet<S>& b) {
              return std::tie(a.row, a.col) < std::tie(b.row, b.col);
            });
  CsrMatrix<S> A;
  A.nrows = nrows;
  A.ncols = ncols;
  A.row_ptr.assign(nrows + 1, 0);
  A.col_idx.reserve(entries.size());
  A.values.reserve(entries.size());
  std::size_t i = 0;
  while (i < entries.size()) {
    std::size_t j = i + 1;
    S sum = entries[i].value;
    while (j < entries.size() && entries[j].row == entries[i].row &&
           entries[j].col == entries[i].col) {
      sum += entries[j].value;  // duplicates are summed
      ++j;
    }
    A.col_idx.push_back(entries[i].col);
    A.values.push_back(sum);
    ++A.row_ptr[entries[i].row + 1];
    i = j;
  }
  for (std::size_t r = 0; r < nrows; ++r) A.row_ptr[r + 1] += A.row_ptr[r];
  return A;
}

namespace detail {
template <Scalar S>
void require_operand(const CsrMatrix<S>& A, std::size_t in, std::size_t out,
                     bool transposed) {
  const std::size_t want_in = transposed ? A.nrows : A.ncols;
  const std::size_t want_out = transposed ? A.ncols : A.nrows;
  if (in != want_in || out != want_out)
    throw std::invalid_argument("matvec dimension mismatch");
}
}  // namespace detail

/// out = A*v
template <Scalar S, detail::VectorLike VIn, detail::VectorLike VOut>
void matvec(const CsrMatrix<S>& A, const VIn& v, VOut&& out,
            OpCounters* ctr = nullptr) {
  detail::require_operand(A, v.size(), out.size(), false);
  if (ctr) ++ctr->matvecs;
  const auto* vp = v.data();
  auto* op = out.data();
  for (std::size_t i = 0; i < A.nrows; ++i) {
    S acc{};
    for (std::size_t k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
      acc += A.values[k] * vp[A.col_idx[k]];
    op[i] = acc;
  }
}

/// out = A^H * v, the conjugate transpose applied without materializing it.
template <Scalar S, detail::VectorLike VIn, detail::VectorLike VOut>
void matvec_hermitian(const CsrMatrix<S>& A, const VIn& v, VOut&& out,
                      OpCounters* ctr = nullptr) {
  detail::require_operand(A, v.size(), out.size(), true);
  if (ctr) ++ctr->hermitian_matvecs;
  auto* op = out.data();
  for (std::size_t j = 0; j < A.ncols; ++j) op[j] = S{};
  const auto* vp = v.data();
  for (std::size_t i = 0; i < A.nrows; ++i)
    for (std::size_t k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
      op[A.col_idx[k]] += conj(A.values[k]) * vp[i];
}

/// Allocating conveniences used by tests and the harness.
template <Scalar S>
DenseVector<S> matvec(const CsrMatrix<S>& A, const DenseVector<S>& v,
                      OpCounters* ctr = nullptr) {
  DenseVector<S> out(A.nrows);
  matvec(A, v, out, ctr);
  return out;
}

template <Scalar S>
DenseVector<S> matvec_hermitian(const CsrMatrix<S>& A, const DenseVector<S>& v,
                                OpCounters* ctr = nullptr) {
  DenseVector<S> out(A.ncols);
  matvec_hermitian(A, v, out, ctr);
  return out;
}

}  // namespace mlns

#endif  // MLNS_CSR_HPP
