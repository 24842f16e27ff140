#ifndef MLNS_ORACLES_HPP
#define MLNS_ORACLES_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "mlns/csr.hpp"
#include "mlns/dense.hpp"
#include "mlns/scalar.hpp"

namespace mlns::oracles {

struct SingularMatrixError : std::runtime_error {
  SingularMatrixError() : std::runtime_error("dense solve: singular matrix") {}
};

struct PivotBreakdownError : std::runtime_error {
  PivotBreakdownError()
      : std::runtime_error("bicg reference: zero inner product") {}
};

/// Row-major dense square matrix; the oracle substrate. Oracles work on a
/// dense copy so they stay independent of the sparse kernels under test.
template <Scalar S>
struct DenseMatrix {
  std::size_t n = 0;
  std::vector<S> a;  // row-major, n*n

  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t size) : n(size), a(size * size, S{}) {}

  S& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
  const S& at(std::size_t i, std::size_t j) const { return a[i * n + j]; }

  static DenseMatrix from_csr(const CsrMatrix<S>& A) {
    if (!A.square())
      throw std::invalid_argument("dense oracle needs a square matrix");
    DenseMatrix M(A.nrows);
    for (std::size_t i = 0; i < A.nrows; ++i)
      for (std::size_t k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
        M.at(i, A.col_idx[k]) += A.values[k];
    return M;
  }
};

template <Scalar S>
DenseVector<S> dense_matvec(const DenseMatrix<S>& A, const DenseVector<S>& v) {
  DenseVector<S> out(A.n);
  for (std::size_t i = 0; i < A.n; ++i) {
    S acc{};
    for (std::size_t j = 0; j < A.n; ++j) acc += A.at(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

template <Scalar S>
DenseVector<S> dense_matvec_hermitian(const DenseMatrix<S>& A,
                                      const DenseVector<S>& v) {
  DenseVector<S> out(A.n);
  for (std::size_t j = 0; j < A.n; ++j) {
    S acc{};
    for (std::size_t i = 0; i < A.n; ++i) acc += conj(A.at(i, j)) * v[i];
    out[j] = acc;
  }
  return out;
}

/// Gaussian elimination with partial pivoting.
template <Scalar S>
DenseVector<S> dense_direct_solve(DenseMatrix<S> A, DenseVector<S> rhs) {
  const std::size_t n = A.n;
  if (rhs.size() != n)
    throw std::invalid_argument("dense solve: rhs length mismatch");
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(A.at(perm[k], k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double cand = std::abs(A.at(perm[i], k));
      if (cand > best) {
        best = cand;
        piv = i;
      }
    }
    if (best == 0.0) throw SingularMatrixError();
    std::swap(perm[k], perm[piv]);
    const S pivot = A.at(perm[k], k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const S lik = A.at(perm[i], k) / pivot;
      if (lik == S{}) continue;
      A.at(perm[i], k) = lik;
      for (std::size_t j = k + 1; j < n; ++j)
        A.at(perm[i], j) -= lik * A.at(perm[k], j);
      rhs[perm[i]] -= lik * rhs[perm[k]];
    }
  }
  DenseVector<S> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    S acc = rhs[perm[ii]];
    for (std::size_t j = ii + 1; j < n; ++j) acc -= A.at(perm[ii], j) * x[j];
    x[ii] = acc / A.at(perm[ii], ii);
  }
  return x;
}

namespace detail {

/// Arnoldi with modified Gram-Schmidt. Returns the basis V (steps+1 columns
/// at most) and the Hessenberg entries H(i,j) for i <= j+1. `lucky` reports
/// the step at which the subdiagonal vanished, or steps if none did.
template <Scalar S>
struct ArnoldiData {
  std::vector<DenseVector<S>> V;
  std::vector<std::vector<S>> Hcols;  // Hcols[j] has j+2 entries
  double beta = 0.0;
  int lucky = 0;
};

template <Scalar S>
ArnoldiData<S> arnoldi(const DenseMatrix<S>& A, const DenseVector<S>& r0,
                       int steps) {
  ArnoldiData<S> out;
  out.beta = norm2(r0);
  out.lucky = steps;
  if (out.beta == 0.0) {
    out.lucky = 0;
    return out;
  }
  DenseVector<S> v = r0;
  scale_in_place(S{1.0 / out.beta}, v);
  out.V.push_back(v);
  for (int m = 0; m < steps; ++m) {
    DenseVector<S> w = dense_matvec(A, out.V.back());
    std::vector<S> h(static_cast<std::size_t>(m) + 2, S{});
    for (int i = 0; i <= m; ++i) {
      h[i] = dot_hermitian(out.V[i], w);
      axpy(-h[i], out.V[i], w);
    }
    const double hnext = norm2(w);
    h[m + 1] = S{hnext};
    out.Hcols.push_back(std::move(h));
    if (hnext <= 1e-14 * out.beta) {
      out.lucky = m + 1;
      break;
    }
    scale_in_place(S{1.0 / hnext}, w);
    out.V.push_back(std::move(w));
  }
  return out;
}

/// Local dense solve for the m x m leading Hessenberg block (FOM step).
template <Scalar S>
std::vector<S> solve_hessenberg_square(const ArnoldiData<S>& ar, int m,
                                       double beta) {
  DenseMatrix<S> H(m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i <= std::min(j + 1, m - 1); ++i)
      H.at(i, j) = ar.Hcols[j][i];
  DenseVector<S> rhs(m);
  rhs[0] = S{beta};
  DenseVector<S> y = dense_direct_solve(H, rhs);
  return std::vector<S>(y.begin(), y.end());
}

/// Least squares on the (m+1) x m Hessenberg via complex Givens rotations
/// (GMRES step).
template <Scalar S>
std::vector<S> solve_hessenberg_ls(const ArnoldiData<S>& ar, int m,
                                   double beta) {
  std::vector<std::vector<S>> R(m);
  for (int j = 0; j < m; ++j) {
    R[j].assign(m + 1, S{});
    for (int i = 0; i < std::min(j + 2, m + 1); ++i) R[j][i] = ar.Hcols[j][i];
  }
  std::vector<S> g(m + 1, S{});
  g[0] = S{beta};
  for (int j = 0; j < m; ++j) {
    const S a = R[j][j];
    const S b = R[j][j + 1];
    double cs;
    S sn;
    if (b == S{}) {
      cs = 1.0;
      sn = S{};
    } else if (a == S{}) {
      cs = 0.0;
      sn = conj(b) / std::abs(b);
    } else {
      const double t = std::sqrt(abs2(a) + abs2(b));
      cs = std::abs(a) / t;
      sn = (a / std::abs(a)) * conj(b) / t;
    }
    for (int jj = j; jj < m; ++jj) {
      const S top = R[jj][j];
      const S bot = R[jj][j + 1];
      R[jj][j] = cs * top + sn * bot;
      R[jj][j + 1] = cs * bot - conj(sn) * top;
    }
    const S gt = g[j];
    const S gb = g[j + 1];
    g[j] = cs * gt + sn * gb;
    g[j + 1] = cs * gb - conj(sn) * gt;
  }
  std::vector<S> y(m, S{});
  for (int i = m - 1; i >= 0; --i) {
    S acc = g[i];
    for (int j = i + 1; j < m; ++j) acc -= R[j][i] * y[j];
    y[i] = acc / R[i][i];
  }
  return y;
}

template <Scalar S>
double true_residual(const DenseMatrix<S>& A, const DenseVector<S>& b,
                     const DenseVector<S>& x) {
  DenseVector<S> ax = dense_matvec(A, x);
  sub_from(b, ax);
  return norm2(ax);
}

template <Scalar S>
std::vector<double> arnoldi_reference(const DenseMatrix<S>& A,
                                      const DenseVector<S>& b,
                                      const DenseVector<S>& x0, int steps,
                                      bool minimal_residual) {
  if (steps < 0 || static_cast<std::size_t>(steps) > A.n)
    throw std::invalid_argument("oracle: steps must lie in [0, N]");
  DenseVector<S> r0 = dense_matvec(A, x0);
  sub_from(b, r0);
  const auto ar = arnoldi(A, r0, steps);
  std::vector<double> history;
  const int limit = std::min(steps, ar.lucky);
  for (int m = 1; m <= limit; ++m) {
    const auto y = minimal_residual ? solve_hessenberg_ls(ar, m, ar.beta)
                                    : solve_hessenberg_square(ar, m, ar.beta);
    DenseVector<S> x = x0;
    for (int i = 0; i < m; ++i) axpy(y[i], ar.V[i], x);
    history.push_back(true_residual(A, b, x));
  }
  return history;
}

}  // namespace detail

/// Residual norms ||b - A x_m|| of the full orthogonalization (Galerkin)
/// method for m = 1..steps. An exact-invariance (lucky) breakdown stops the
/// list at the step that reached exact convergence.
template <Scalar S>
std::vector<double> fom_reference(const DenseMatrix<S>& A,
                                  const DenseVector<S>& b,
                                  const DenseVector<S>& x0, int steps) {
  return detail::arnoldi_reference(A, b, x0, steps, false);
}

/// Residual norms of the minimal-residual (GMRES) method for m = 1..steps.
template <Scalar S>
std::vector<double> gmres_reference(const DenseMatrix<S>& A,
                                    const DenseVector<S>& b,
                                    const DenseVector<S>& x0, int steps) {
  return detail::arnoldi_reference(A, b, x0, steps, true);
}

/// Textbook two-sided Lanczos BiCG with shadow sequence driven by A^H.
/// Returns true residual norms ||b - A x_k|| for k = 1..steps.
template <Scalar S>
std::vector<double> bicg_reference(const DenseMatrix<S>& A,
                                   const DenseVector<S>& b,
                                   const DenseVector<S>& x0,
                                   const DenseVector<S>& shadow_r0,
                                   int steps) {
  DenseVector<S> x = x0;
  DenseVector<S> r = dense_matvec(A, x0);
  sub_from(b, r);
  DenseVector<S> rt = shadow_r0;
  DenseVector<S> p = r;
  DenseVector<S> pt = rt;
  S rho = dot_hermitian(rt, r);
  std::vector<double> history;
  for (int k = 0; k < steps; ++k) {
    if (rho == S{}) throw PivotBreakdownError();
    DenseVector<S> q = dense_matvec(A, p);
    DenseVector<S> qt = dense_matvec_hermitian(A, pt);
    const S den = dot_hermitian(pt, q);
    if (den == S{}) throw PivotBreakdownError();
    const S alpha = rho / den;
    axpy(alpha, p, x);
    axpy(-alpha, q, r);
    axpy(-conj(alpha), qt, rt);
    history.push_back(detail::true_residual(A, b, x));
    const S rho_next = dot_hermitian(rt, r);
    const S beta = rho_next / rho;
    rho = rho_next;
    // p = r + beta p; pt = rt + conj(beta) pt
    scale_in_place(beta, p);
    axpy(S{1.0}, r, p);
    scale_in_place(conj(beta), pt);
    axpy(S{1.0}, rt, pt);
  }
  return history;
}

}  // namespace mlns::oracles

#endif  // MLNS_ORACLES_HPP
