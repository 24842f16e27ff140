#ifndef MLNS_MLBICG_HPP
#define MLNS_MLBICG_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "mlns/csr.hpp"
#include "mlns/dense.hpp"
#include "mlns/index_map.hpp"
#include "mlns/mlbicgstabt.hpp"
#include "mlns/solver_types.hpp"

namespace mlns {

/// How the shadow columns of ML(n)BiCG are chosen.
///
/// `fixed` uses the supplied Q throughout. The adaptive modes pick each
/// shadow vector just before its first use, which is meaningful when
/// n >= N: `residual` sets q_k to the previous residual and reproduces a
/// Galerkin (FOM-type) iteration; `a_residual` sets q_k to A times the
/// previous residual and reproduces a minimal-residual (GMRES-type)
/// iteration.
enum class MlBicgShadowMode { fixed, residual, a_residual };

/// ML(n)BiCG: the multiple-left-starting-vector BiCG progenitor. The shadow
/// sequence p_k = (A^H)^{g_n(k)} q_{r_n(k)} is maintained by advancing each
/// stored shadow column with one A^H multiply per cycle, and the direction
/// sweep orthogonalizes against a sliding window of the last n directions
/// and their A-images.
///
/// Repeated A^H powers make this numerically fragile; it serves as a
/// reference and oracle path, not a production solver.
template <Scalar S>
std::pair<DenseVector<S>, SolverReport> ml_n_bicg(
    const CsrMatrix<S>& A, const DenseVector<S>& b, const DenseVector<S>& x0,
    const DenseBlock<S>& Q, const SolverConfig& cfg,
    MlBicgShadowMode mode = MlBicgShadowMode::fixed) {
  detail::validate_solver_inputs(A, b, x0, cfg);
  if (Q.rows() != A.nrows || Q.cols() < 1)
    throw std::invalid_argument("solver: shadow matrix shape mismatch");
  if (cfg.n != static_cast<int>(Q.cols()))
    throw std::invalid_argument("solver: cfg.n != shadow column count");

  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t N = A.nrows;
  const std::int64_t n = static_cast<std::int64_t>(Q.cols());

  SolverReport rep;
  OpCounters& ct = rep.counters;

  DenseVector<S> x = x0;
  DenseVector<S> r(N), z(N), az(N);
  DenseBlock<S> P(N, Q.cols());    // shadow window, column m-1 mod n holds p_m
  DenseBlock<S> Gd(N, Q.cols());   // direction window g_s, slot s mod n
  DenseBlock<S> Ag(N, Q.cols());   // images A g_s
  std::vector<std::int64_t> power(Q.cols(), 0);
  for (std::size_t i = 0; i < Q.cols(); ++i) copy_into(Q.col(i), P.col(i));

  double bnrm = norm2(b);
  if (bnrm == 0.0) bnrm = 1.0;

  double last_err = 0.0;
  auto finalize = [&](int flag, const char* reason) {
    rep.flag = flag;
    rep.err = last_err;
    if (reason) rep.breakdown_reason = reason;
    matvec(A, x, z);  // diagnostic, uncounted
    sub_from(b, z);
    rep.true_err = norm2(z) / bnrm;
    rep.elapsed_seconds = detail::seconds_since(t0);
    meter_note_bookkeeping(power.size() + rep.residual_history.capacity());
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

  copy_into(r, Gd.col(0));        // g_0 = r_0
  matvec(A, Gd.col(0), Ag.col(0), &ct);

  for (std::int64_t k = 1;; ++k) {
    if (rep.iter >= cfg.max_it) return finalize(kMaxIterations, nullptr);
    // p_k and g_{k-1} both live in slot (k-1) mod n of their blocks
    const std::size_t km1 = static_cast<std::size_t>((k - 1) % n);
    if (mode == MlBicgShadowMode::residual) {
      copy_into(r, P.col(km1));  // q_k = r_{k-1}
    } else if (mode == MlBicgShadowMode::a_residual) {
      matvec(A, r, P.col(km1), &ct);  // q_k = A r_{k-1}
    }
    const S denom = dot_hermitian(P.col(km1), Ag.col(km1), &ct);
    if (std::abs(denom) <= cfg.breakdown_eps)
      return finalize(kBreakdown, "p^H A g vanished");
    const S alpha = dot_hermitian(P.col(km1), r, &ct) / denom;
    axpy(alpha, Gd.col(km1), x, &ct);
    axpy(-alpha, Ag.col(km1), r, &ct);
    last_err = norm2(r) / bnrm;
    ++rep.iter;
    rep.residual_history.push_back(last_err);
    if (last_err < cfg.tol) return finalize(kConverged, nullptr);

    // direction sweep over the window s = max(k-n, 0) .. k-1, accumulating
    // z = r + sum beta_s g_s together with its image az = A z
    copy_into(r, z);
    matvec(A, r, az, &ct);
    const std::int64_t lo = std::max<std::int64_t>(k - n, 0);
    for (std::int64_t s = lo; s < k; ++s) {
      const std::size_t sc = static_cast<std::size_t>(s % n);
      const S ds = dot_hermitian(P.col(sc), Ag.col(sc), &ct);  // p_{s+1}^H A g_s
      if (std::abs(ds) <= cfg.breakdown_eps)
        return finalize(kBreakdown, "p^H A g vanished in sweep");
      const S beta = -dot_hermitian(P.col(sc), az, &ct) / ds;
      axpy(beta, Gd.col(sc), z, &ct);
      axpy(beta, Ag.col(sc), az, &ct);
    }
    const std::size_t kc = static_cast<std::size_t>(k % n);
    copy_into(z, Gd.col(kc));                 // g_k
    matvec(A, Gd.col(kc), Ag.col(kc), &ct);   // fresh image of g_k

    // p_{k+1} = (A^H)^{g_n(k+1)} q_{r_n(k+1)}: advance one shadow column by
    // A^H when its cycle number increases
    const std::int64_t jnext = g_index(n, k + 1);
    const std::size_t cnext = static_cast<std::size_t>(r_index(n, k + 1) - 1);
    if (mode == MlBicgShadowMode::fixed && jnext > power[cnext]) {
      matvec_hermitian(A, P.col(cnext), z, &ct);
      copy_into(z, P.col(cnext));
      power[cnext] = jnext;
    }
  }
}

}  // namespace mlns

#endif  // MLNS_MLBICG_HPP
