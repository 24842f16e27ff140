#ifndef MLNS_BICGSTAB_HPP
#define MLNS_BICGSTAB_HPP

#include <chrono>
#include <cmath>
#include <utility>

#include "mlns/csr.hpp"
#include "mlns/dense.hpp"
#include "mlns/mlbicgstabt.hpp"
#include "mlns/omega.hpp"
#include "mlns/precond.hpp"
#include "mlns/solver_types.hpp"

namespace mlns {

/// Preconditioned BiCGStab baseline with the shadow vector fixed to the
/// initial residual. The shadow inner products are kept as e = rhat^H r and
/// c = rhat^H v, and the direction update is written as
/// p = (r + bt*v) - (bt*p)/omega with bt = -e_new/c, which is the textbook
/// p = r + beta*(p - omega*v) with beta = -bt/omega. Stopping rule, flag
/// convention, counters and the iteration-budget check match the block
/// solver, as does the mid-iteration convergence check on s = r - alpha*v
/// before the stabilization step.
template <Scalar S>
std::pair<DenseVector<S>, SolverReport> bicgstab(const CsrMatrix<S>& A,
                                                 const Preconditioner<S>& P,
                                                 const DenseVector<S>& b,
                                                 const DenseVector<S>& x0,
                                                 const SolverConfig& cfg) {
  detail::validate_solver_inputs(A, b, x0, cfg);
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t N = A.nrows;

  SolverReport rep;
  OpCounters& ct = rep.counters;

  DenseVector<S> x = x0;
  DenseVector<S> r(N), u(N), t(N), rhat(N), p(N), phat(N), v(N);
  S e{}, cdenom{}, omega{};

  double bnrm = norm2(b);
  if (bnrm == 0.0) bnrm = 1.0;

  double last_err = 0.0;
  auto finalize = [&](int flag, const char* reason) {
    rep.flag = flag;
    rep.err = last_err;
    if (reason) rep.breakdown_reason = reason;
    matvec(A, x, t);  // diagnostic, uncounted
    sub_from(b, t);
    rep.true_err = norm2(t) / bnrm;
    rep.elapsed_seconds = detail::seconds_since(t0);
    meter_note_bookkeeping(rep.residual_history.capacity());
    return std::make_pair(std::move(x), std::move(rep));
  };

  if (all_zero(x0)) {
    copy_into(b, r);
  } else {
    matvec(A, x, r, &ct);
    sub_from(b, r, &ct);
  }
  last_err = norm2(r) / bnrm;
  rep.residual_history.push_back(last_err);
  if (last_err < cfg.tol) return finalize(kConverged, nullptr);

  copy_into(r, rhat);
  copy_into(r, p);
  P.apply_m_inverse(p, phat, &ct);
  matvec(A, phat, v, &ct);
  cdenom = dot_hermitian(rhat, v, &ct);
  if (std::abs(cdenom) <= cfg.breakdown_eps)
    return finalize(kBreakdown, "rhat^H A p vanished at setup");
  e = dot_hermitian(rhat, r, &ct);

  while (true) {
    if (rep.iter >= cfg.max_it) return finalize(kMaxIterations, nullptr);
    const S alpha = e / cdenom;
    axpy(alpha, phat, x, &ct);       // x += alpha * phat
    set_axpy(u, r, -alpha, v, &ct);  // s = r - alpha * v
    last_err = norm2(u) / bnrm;
    if (last_err < cfg.tol) {
      ++rep.iter;
      rep.residual_history.push_back(last_err);
      return finalize(kConverged, nullptr);
    }
    P.apply_m_inverse(u, phat, &ct);  // shat
    matvec(A, phat, t, &ct);          // t = A shat
    const auto om = choose_omega_status<S>(t, u, cfg.kappa, &ct);
    if (om.status == OmegaStatus::zero_denominator)
      return finalize(kBreakdown, "||A shat|| vanished");
    if (om.status == OmegaStatus::omega_zero)
      return finalize(kBreakdown, "omega vanished");
    omega = om.omega;
    axpy(omega, phat, x, &ct);      // x += omega * shat
    set_axpy(r, u, -omega, t, &ct);  // r = s - omega * t
    last_err = norm2(r) / bnrm;
    ++rep.iter;
    rep.residual_history.push_back(last_err);
    if (last_err < cfg.tol) return finalize(kConverged, nullptr);

    const S e_new = dot_hermitian(rhat, r, &ct);
    const S bt = -e_new / cdenom;
    set_axpy(t, r, bt, v, &ct);   // t reused as z_w = r + bt*v
    scale_in_place(bt, p, &ct);
    stab_combine(p, t, omega, &ct);  // p = z_w - p/omega
    P.apply_m_inverse(p, phat, &ct);
    matvec(A, phat, v, &ct);
    cdenom = dot_hermitian(rhat, v, &ct);
    if (std::abs(cdenom) <= cfg.breakdown_eps)
      return finalize(kBreakdown, "rhat^H A p vanished");
    e = e_new;
  }
}

}  // namespace mlns

#endif  // MLNS_BICGSTAB_HPP
