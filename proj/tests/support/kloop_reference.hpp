#ifndef MLNS_KLOOP_REFERENCE_HPP
#define MLNS_KLOOP_REFERENCE_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "mlns/csr.hpp"
#include "mlns/dense.hpp"
#include "mlns/index_map.hpp"
#include "mlns/scalar.hpp"

namespace mlns::testsupport {

/// Literal k-loop transcription of the unpreconditioned A^H-based block
/// BiCGStab recurrence, with the index functions g_n/r_n evaluated every
/// iteration and the full history of g_k, w_k, c_k kept in memory. This is
/// deliberately naive: it exists to cross-check the windowed j/i-split
/// production solver iterate by iterate.
///
/// The beta~ sweep bound "s = max(k-n, 0) .. g_n(k)*n - 1" is empty exactly
/// during the first cycle, where the direction reduces to z_w = r_k before
/// the f-recurrence; the 1/omega term is skipped there since no omega exists
/// yet.
template <Scalar S>
struct KLoopResult {
  std::vector<DenseVector<S>> x_iterates;  // x_1, x_2, ... (one per iteration)
  std::vector<double> residual_history;    // ||r_k||/||b||, k = 0, 1, ...
  int flag = 1;                            // 0 converged, 1 budget, -1 breakdown
};

template <Scalar S>
KLoopResult<S> kloop_reference(const CsrMatrix<S>& A, const DenseVector<S>& b,
                               const DenseVector<S>& x0, const DenseBlock<S>& Q,
                               double tol, std::int64_t max_it) {
  const std::size_t N = A.nrows;
  const std::int64_t n = static_cast<std::int64_t>(Q.cols());
  KLoopResult<S> out;

  DenseVector<S> x = x0;
  DenseVector<S> r = matvec(A, x0);
  sub_from(b, r);
  double bnrm = norm2(b);
  if (bnrm == 0.0) bnrm = 1.0;
  out.residual_history.push_back(norm2(r) / bnrm);
  if (out.residual_history.back() < tol) {
    out.flag = 0;
    return out;
  }

  std::vector<DenseVector<S>> f;  // f_i = A^H q_i, i = 1..n-1
  for (std::int64_t i = 0; i + 1 < n; ++i) {
    DenseVector<S> fi(N);
    matvec_hermitian(A, Q.col(static_cast<std::size_t>(i)), fi);
    f.push_back(std::move(fi));
  }

  std::vector<DenseVector<S>> g, w;  // g_k, w_k for every k
  std::vector<S> c;                  // c_k for every k
  g.push_back(r);                    // g_0 = r_0
  w.push_back(matvec(A, g[0]));      // w_0 = A g_0
  c.push_back(dot_hermitian(Q.col(0), w[0]));
  if (c[0] == S{}) {
    out.flag = -1;
    return out;
  }

  S omega{};
  for (std::int64_t k = 1; k <= max_it; ++k) {
    const std::int64_t i = r_index(n, k);
    const std::int64_t j = g_index(n, k);
    const auto q_of = [&](std::int64_t index1) {  // q with 1-based index
      return Q.col(static_cast<std::size_t>(index1 - 1));
    };
    const S alpha =
        dot_hermitian(q_of(i), r) / c[static_cast<std::size_t>(k - 1)];
    DenseVector<S> gk(N);
    if (i < n) {
      axpy(alpha, g[static_cast<std::size_t>(k - 1)], x);
      axpy(-alpha, w[static_cast<std::size_t>(k - 1)], r);
      out.residual_history.push_back(norm2(r) / bnrm);
      out.x_iterates.push_back(x);
      if (out.residual_history.back() < tol) {
        out.flag = 0;
        return out;
      }
      DenseVector<S> zw = r;
      for (std::int64_t s = std::max<std::int64_t>(k - n, 0); s < j * n; ++s) {
        const S bt = -dot_hermitian(q_of(r_index(n, s + 1)), zw) /
                     c[static_cast<std::size_t>(s)];
        axpy(bt, w[static_cast<std::size_t>(s)], zw);
        axpy(bt, g[static_cast<std::size_t>(s)], gk);
      }
      if (j >= 1)
        stab_combine(gk, zw, omega);
      else
        gk = zw;  // empty sweep in the first cycle
      for (std::int64_t s = j * n; s < k; ++s) {
        const S bs = -dot_hermitian(f[static_cast<std::size_t>(
                         r_index(n, s + 1) - 1)], gk) /
                     c[static_cast<std::size_t>(s)];
        axpy(bs, g[static_cast<std::size_t>(s)], gk);
      }
    } else {
      axpy(alpha, g[static_cast<std::size_t>(k - 1)], x);
      DenseVector<S> u(N);
      set_axpy(u, r, -alpha, w[static_cast<std::size_t>(k - 1)]);
      const double err_u = norm2(u) / bnrm;
      if (err_u < tol) {
        out.residual_history.push_back(err_u);
        out.x_iterates.push_back(x);
        out.flag = 0;
        return out;
      }
      DenseVector<S> z = matvec(A, u);
      const double den = real_part(dot_hermitian(z, z));
      if (den == 0.0) {
        out.flag = -1;
        return out;
      }
      omega = dot_hermitian(z, u) / den;
      if (omega == S{}) {
        out.flag = -1;
        return out;
      }
      axpy(omega, u, x);
      set_axpy(r, u, -omega, z);
      out.residual_history.push_back(norm2(r) / bnrm);
      out.x_iterates.push_back(x);
      if (out.residual_history.back() < tol) {
        out.flag = 0;
        return out;
      }
      DenseVector<S> zw = r;
      for (std::int64_t s = j * n; s < k; ++s) {
        const S bt = -dot_hermitian(q_of(r_index(n, s + 1)), zw) /
                     c[static_cast<std::size_t>(s)];
        axpy(bt, w[static_cast<std::size_t>(s)], zw);
        axpy(bt, g[static_cast<std::size_t>(s)], gk);
      }
      stab_combine(gk, zw, omega);
    }
    w.push_back(matvec(A, gk));
    g.push_back(std::move(gk));
    c.push_back(dot_hermitian(q_of(r_index(n, k + 1)), w.back()));
    if (c.back() == S{}) {
      out.flag = -1;
      return out;
    }
  }
  return out;
}

}  // namespace mlns::testsupport

#endif  // MLNS_KLOOP_REFERENCE_HPP
