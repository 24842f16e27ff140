#ifndef MLNS_MLBICGSTABT_HPP
#define MLNS_MLBICGSTABT_HPP

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "mlns/csr.hpp"
#include "mlns/dense.hpp"
#include "mlns/omega.hpp"
#include "mlns/precond.hpp"
#include "mlns/solver_types.hpp"
#include "mlns/workspace.hpp"

namespace mlns {

namespace detail {

template <Scalar S>
void validate_solver_inputs(const CsrMatrix<S>& A, const DenseVector<S>& b,
                            const DenseVector<S>& x0, const SolverConfig& cfg) {
  if (!A.square()) throw std::invalid_argument("solver: matrix must be square");
  if (b.size() != A.nrows || x0.size() != A.nrows)
    throw std::invalid_argument("solver: vector length mismatch");
  if (cfg.tol <= 0.0) throw std::invalid_argument("solver: tol must be > 0");
  if (cfg.max_it < 1)
    throw std::invalid_argument("solver: max_it must be >= 1");
  if (cfg.kappa < 0.0 || cfg.kappa >= 1.0)
    throw std::invalid_argument("solver: kappa must lie in [0, 1)");
}

inline double seconds_since(
    std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace detail

/// ML(n)BiCGStabt: the n-shadow-vector BiCGStab generalization that applies
/// A^H once per shadow column at setup. One implementation serves both the
/// preconditioned and unpreconditioned forms; passing the identity
/// preconditioner recovers the latter.
///
/// The global iteration index k = j*n + i is handled as an explicit outer
/// j-cycle over an inner i-loop, so the index functions are never evaluated
/// in the iteration. Column s (0-based) of G, W and c holds the data for the
/// most recent global index congruent to s mod n; each column is overwritten
/// exactly once per cycle, after its last use.
///
/// Setup work: F = M^{-H} A^H [q_1..q_{n-1}], r_0 = b - A x_0 (the matvec is
/// skipped for a zero initial guess), g_hat_0 = M^{-1} r_0, w_0 = A g_hat_0.
/// Each iteration then costs one matvec and one M-solve, plus one extra of
/// each at the i = n minimization step, averaging 1 + 1/n per iteration.
///
/// Convergence is checked after every x/r update against ||r||/||b|| < tol.
/// At the i = n step the intermediate u is checked before the omega
/// minimization and the run returns mid-cycle if it already satisfies the
/// tolerance. The iteration budget is checked at the top of each iteration,
/// so a run halting at a cycle boundary has completed that cycle's direction
/// update. The true residual ||b - A x||/||b|| is recomputed at every exit,
/// whatever the flag; that diagnostic matvec is excluded from the counters.
///
/// flag 0: converged; flag 1: budget exhausted; flag -1: breakdown, i.e.
/// some |c_s| <= breakdown_eps, ||A u_hat|| = 0, or omega = 0 after the
/// safeguard.
template <Scalar S>
std::pair<DenseVector<S>, SolverReport> ml_n_bicgstabt(
    const CsrMatrix<S>& A, const Preconditioner<S>& P, const DenseVector<S>& b,
    const DenseVector<S>& x0, const DenseBlock<S>& Q,
    const SolverConfig& cfg) {
  detail::validate_solver_inputs(A, b, x0, cfg);
  if (Q.rows() != A.nrows || Q.cols() < 1)
    throw std::invalid_argument("solver: shadow matrix shape mismatch");
  if (cfg.n != static_cast<int>(Q.cols()))
    throw std::invalid_argument("solver: cfg.n != shadow column count");

  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t N = A.nrows;
  const std::size_t n = Q.cols();

  SolverReport rep;
  OpCounters& ct = rep.counters;

  DenseVector<S> x = x0;
  DenseVector<S> r(N), u(N), zw(N), gh(N);
  DenseBlock<S> G(N, n), W(N, n), F(N, n - 1);
  std::vector<S> c(n, S{});
  std::vector<S> omega_history;
  S e{};
  S omega{};

  double bnrm = norm2(b);
  if (bnrm == 0.0) bnrm = 1.0;

  double last_err = 0.0;
  auto finalize = [&](int flag, const char* reason) {
    rep.flag = flag;
    rep.err = last_err;
    if (reason) rep.breakdown_reason = reason;
    matvec(A, x, zw);  // diagnostic, uncounted
    sub_from(b, zw);
    rep.true_err = norm2(zw) / bnrm;
    rep.elapsed_seconds = detail::seconds_since(t0);
    meter_note_bookkeeping(c.size() + omega_history.capacity() +
                           rep.residual_history.capacity());
    return std::make_pair(std::move(x), std::move(rep));
  };

  // r_0 = b - A x_0; the matvec is skipped for a zero initial guess
  if (all_zero(x0)) {
    copy_into(b, r);
  } else {
    matvec(A, x, r, &ct);
    sub_from(b, r, &ct);
  }
  last_err = norm2(r) / bnrm;
  rep.residual_history.push_back(last_err);
  if (last_err < cfg.tol) return finalize(kConverged, nullptr);

  // F = M^{-H} A^H [q_1, ..., q_{n-1}]
  for (std::size_t i = 0; i + 1 < n; ++i) {
    matvec_hermitian(A, Q.col(i), zw, &ct);
    P.apply_m_inv_hermitian(zw, F.col(i), &ct);
  }

  copy_into(r, G.col(0));                // g_0 = r_0
  P.apply_m_inverse(r, gh, &ct);         // g_hat_0 = M^{-1} r_0
  matvec(A, gh, W.col(0), &ct);          // w_0 = A g_hat_0
  c[0] = dot_hermitian(Q.col(0), W.col(0), &ct);
  if (std::abs(c[0]) <= cfg.breakdown_eps)
    return finalize(kBreakdown, "c_0 vanished at setup");
  e = dot_hermitian(Q.col(0), r, &ct);   // e_0 = q_1^H r_0

  for (std::int64_t j = 0;; ++j) {
    // ---- inner positions i = 1 .. n-1 ----
    for (std::size_t i = 1; i < n; ++i) {
      if (rep.iter >= cfg.max_it) return finalize(kMaxIterations, nullptr);
      const S alpha = e / c[i - 1];
      axpy(alpha, gh, x, &ct);             // x += alpha * g_hat
      axpy(-alpha, W.col(i - 1), r, &ct);  // r -= alpha * w
      last_err = norm2(r) / bnrm;
      ++rep.iter;
      rep.residual_history.push_back(last_err);
      if (last_err < cfg.tol) return finalize(kConverged, nullptr);
      e = dot_hermitian(Q.col(i), r, &ct);      // e_k = q_{i+1}^H r_k

      if (j >= 1) {
        // beta~ sweep over the previous cycle's columns i .. n-1
        const S bt = -e / c[i];
        set_axpy(zw, r, bt, W.col(i), &ct);     // z_w = r + beta~ * w_old
        scale_in_place(bt, G.col(i), &ct);
        for (std::size_t s = i + 1; s < n; ++s) {
          const S bts = -dot_hermitian(Q.col(s), zw, &ct) / c[s];
          axpy(bts, W.col(s), zw, &ct);
          axpy(bts, G.col(s), G.col(i), &ct);
        }
        stab_combine(G.col(i), zw, omega, &ct);  // g = z_w - g/omega
        // beta sweep over this cycle's columns 0 .. i-1 via F
        for (std::size_t s = 0; s < i; ++s) {
          const S bs = -dot_hermitian(F.col(s), G.col(i), &ct) / c[s];
          axpy(bs, G.col(s), G.col(i), &ct);
        }
      } else {
        // first cycle: no previous w-columns exist, only the F recurrence
        const S b0 = -dot_hermitian(F.col(0), r, &ct) / c[0];
        set_axpy(G.col(i), r, b0, G.col(0), &ct);
        for (std::size_t s = 1; s < i; ++s) {
          const S bs = -dot_hermitian(F.col(s), G.col(i), &ct) / c[s];
          axpy(bs, G.col(s), G.col(i), &ct);
        }
      }

      P.apply_m_inverse(G.col(i), gh, &ct);
      matvec(A, gh, W.col(i), &ct);
      c[i] = dot_hermitian(Q.col(i), W.col(i), &ct);
      if (std::abs(c[i]) <= cfg.breakdown_eps)
        return finalize(kBreakdown, "c_s vanished in inner loop");
    }

    // ---- position i = n: the minimization step ----
    if (rep.iter >= cfg.max_it) return finalize(kMaxIterations, nullptr);
    const S alpha = e / c[n - 1];
    axpy(alpha, gh, x, &ct);                    // x += alpha * g_hat
    set_axpy(u, r, -alpha, W.col(n - 1), &ct);        // u = r - alpha * w
    last_err = norm2(u) / bnrm;
    if (last_err < cfg.tol) {
      // converged on the intermediate u, before the minimization update
      ++rep.iter;
      rep.residual_history.push_back(last_err);
      return finalize(kConverged, nullptr);
    }
    P.apply_m_inverse(u, gh, &ct);              // u_hat = M^{-1} u
    matvec(A, gh, zw, &ct);                     // z = A u_hat
    const auto om = choose_omega_status<S>(zw, u, cfg.kappa, &ct);
    if (om.status == OmegaStatus::zero_denominator)
      return finalize(kBreakdown, "||A u_hat|| vanished");
    if (om.status == OmegaStatus::omega_zero)
      return finalize(kBreakdown, "omega vanished");
    omega = om.omega;
    omega_history.push_back(omega);
    axpy(omega, gh, x, &ct);                    // x += omega * u_hat
    set_axpy(r, u, -omega, zw, &ct);            // r = u - omega * z
    last_err = norm2(r) / bnrm;
    ++rep.iter;
    rep.residual_history.push_back(last_err);
    if (last_err < cfg.tol) return finalize(kConverged, nullptr);

    // cycle-end direction update (global index j*n + n, column 0)
    e = dot_hermitian(Q.col(0), r, &ct);
    const S bt = -e / c[0];
    set_axpy(zw, r, bt, W.col(0), &ct);
    scale_in_place(bt, G.col(0), &ct);
    for (std::size_t s = 1; s < n; ++s) {
      const S bts = -dot_hermitian(Q.col(s), zw, &ct) / c[s];
      axpy(bts, W.col(s), zw, &ct);
      axpy(bts, G.col(s), G.col(0), &ct);
    }
    stab_combine(G.col(0), zw, omega, &ct);
    P.apply_m_inverse(G.col(0), gh, &ct);
    matvec(A, gh, W.col(0), &ct);
    c[0] = dot_hermitian(Q.col(0), W.col(0), &ct);
    if (std::abs(c[0]) <= cfg.breakdown_eps)
      return finalize(kBreakdown, "c_s vanished at cycle end");
    // e already holds q_1^H r for the next cycle's first alpha
  }
}

}  // namespace mlns

#endif  // MLNS_MLBICGSTABT_HPP
