#ifndef MLNS_PRECOND_HPP
#define MLNS_PRECOND_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlns/counters.hpp"
#include "mlns/csr.hpp"
#include "mlns/dense.hpp"
#include "mlns/scalar.hpp"

namespace mlns {

struct ZeroPivotError : std::runtime_error {
  std::size_t row;
  explicit ZeroPivotError(std::size_t r)
      : std::runtime_error("ilu0: zero pivot in row " + std::to_string(r)),
        row(r) {}
};

struct MissingDiagonalError : std::runtime_error {
  std::size_t row;
  explicit MissingDiagonalError(std::size_t r)
      : std::runtime_error("ilu0: no stored diagonal entry in row " +
                           std::to_string(r)),
        row(r) {}
};

/// Zero-fill incomplete LU factors on exactly the sparsity pattern of A.
/// L (strict lower, unit diagonal implicit) and U (upper including the
/// diagonal) are interleaved in one CSR matrix sharing A's index arrays.
template <Scalar S>
struct Ilu0Factors {
  CsrMatrix<S> combined;
  std::vector<std::size_t> diag_ptr;  // value index of each row's diagonal
};

/// IKJ-ordered ILU(0). A zero computed pivot is a hard error, never
/// perturbed; callers that want to proceed anyway retry with the identity
/// preconditioner.
template <Scalar S>
Ilu0Factors<S> ilu0_factorize(const CsrMatrix<S>& A) {
  if (!A.square()) throw std::invalid_argument("ilu0: matrix must be square");
  const std::size_t n = A.nrows;
  Ilu0Factors<S> F{A, std::vector<std::size_t>(n)};
  auto& M = F.combined;

  for (std::size_t i = 0; i < n; ++i) {
    bool found = false;
    for (std::size_t k = M.row_ptr[i]; k < M.row_ptr[i + 1]; ++k)
      if (M.col_idx[k] == i) {
        F.diag_ptr[i] = k;
        found = true;
        break;
      }
    if (!found) throw MissingDiagonalError(i);
  }

  // scatter map: column -> value index within the current row, else npos
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::vector<std::size_t> pos(n, npos);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t idx = M.row_ptr[i]; idx < M.row_ptr[i + 1]; ++idx)
      pos[M.col_idx[idx]] = idx;
    for (std::size_t idx = M.row_ptr[i];
         idx < M.row_ptr[i + 1] && M.col_idx[idx] < i; ++idx) {
      const std::size_t k = M.col_idx[idx];
      const S pivot = M.values[F.diag_ptr[k]];
      if (pivot == S{}) throw ZeroPivotError(k);
      const S lik = (M.values[idx] /= pivot);
      for (std::size_t u = F.diag_ptr[k] + 1; u < M.row_ptr[k + 1]; ++u) {
        const std::size_t j = M.col_idx[u];
        if (pos[j] != npos) M.values[pos[j]] -= lik * M.values[u];
      }
    }
    if (M.values[F.diag_ptr[i]] == S{}) throw ZeroPivotError(i);
    for (std::size_t idx = M.row_ptr[i]; idx < M.row_ptr[i + 1]; ++idx)
      pos[M.col_idx[idx]] = npos;
  }
  return F;
}

/// Either the identity map or an ILU(0) factorization. Using the identity
/// realizes the unpreconditioned algorithms inside the single preconditioned
/// code path; it still counts as a preconditioner application.
template <Scalar S>
class Preconditioner {
 public:
  static Preconditioner identity() { return Preconditioner{}; }
  static Preconditioner ilu0(Ilu0Factors<S> factors) {
    Preconditioner p;
    p.factors_ = std::move(factors);
    return p;
  }

  bool is_identity() const { return !factors_.has_value(); }
  const Ilu0Factors<S>* factors() const {
    return factors_ ? &*factors_ : nullptr;
  }

  /// out = M^{-1} v  (forward substitution with L, then backward with U)
  template <detail::VectorLike VIn, detail::VectorLike VOut>
  void apply_m_inverse(const VIn& v, VOut&& out,
                       OpCounters* ctr = nullptr) const {
    if (ctr) ++ctr->precond_applies;
    copy_into(v, out);
    if (!factors_) return;
    const auto& M = factors_->combined;
    const auto& diag = factors_->diag_ptr;
    auto* y = out.data();
    const std::size_t n = M.nrows;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = M.row_ptr[i]; k < diag[i]; ++k)
        y[i] -= M.values[k] * y[M.col_idx[k]];
    for (std::size_t ii = n; ii-- > 0;) {
      for (std::size_t k = diag[ii] + 1; k < M.row_ptr[ii + 1]; ++k)
        y[ii] -= M.values[k] * y[M.col_idx[k]];
      y[ii] /= M.values[diag[ii]];
    }
  }

  /// out = M^{-H} v = L^{-H} (U^{-H} v): the conjugate-transposed factors
  /// applied in reversed order, each traversed row-wise with scattered
  /// updates so the transpose is never formed.
  template <detail::VectorLike VIn, detail::VectorLike VOut>
  void apply_m_inv_hermitian(const VIn& v, VOut&& out,
                             OpCounters* ctr = nullptr) const {
    if (ctr) ++ctr->hermitian_precond_applies;
    copy_into(v, out);
    if (!factors_) return;
    const auto& M = factors_->combined;
    const auto& diag = factors_->diag_ptr;
    auto* y = out.data();
    const std::size_t n = M.nrows;
    // U^H y = v  (U^H is lower triangular)
    for (std::size_t i = 0; i < n; ++i) {
      y[i] /= conj(M.values[diag[i]]);
      for (std::size_t k = diag[i] + 1; k < M.row_ptr[i + 1]; ++k)
        y[M.col_idx[k]] -= conj(M.values[k]) * y[i];
    }
    // L^H z = y  (unit diagonal, L^H is upper triangular)
    for (std::size_t i = n; i-- > 0;)
      for (std::size_t k = M.row_ptr[i]; k < diag[i]; ++k)
        y[M.col_idx[k]] -= conj(M.values[k]) * y[i];
  }

 private:
  std::optional<Ilu0Factors<S>> factors_;
};

template <Scalar S>
DenseVector<S> apply_m_inverse(const Preconditioner<S>& P,
                               const DenseVector<S>& v,
                               OpCounters* ctr = nullptr) {
  DenseVector<S> out(v.size());
  P.apply_m_inverse(v, out, ctr);
  return out;
}

template <Scalar S>
DenseVector<S> apply_m_inv_hermitian(const Preconditioner<S>& P,
                                     const DenseVector<S>& v,
                                     OpCounters* ctr = nullptr) {
  DenseVector<S> out(v.size());
  P.apply_m_inv_hermitian(v, out, ctr);
  return out;
}

}  // namespace mlns

#endif  // MLNS_PRECOND_HPP
