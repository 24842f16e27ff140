#ifndef MLNS_OMEGA_HPP
#define MLNS_OMEGA_HPP

#include <cmath>
#include <stdexcept>

#include "mlns/counters.hpp"
#include "mlns/dense.hpp"
#include "mlns/scalar.hpp"

namespace mlns {

struct ZeroDenominatorError : std::runtime_error {
  ZeroDenominatorError() : std::runtime_error("choose_omega: ||Au|| is zero") {}
};

struct OmegaBreakdownError : std::runtime_error {
  OmegaBreakdownError() : std::runtime_error("choose_omega: omega is zero") {}
};

enum class OmegaStatus { ok, zero_denominator, omega_zero };

template <Scalar S>
struct OmegaResult {
  S omega{};
  double rho_abs = 0.0;
  OmegaStatus status = OmegaStatus::ok;
};

/// Once-per-cycle minimization weight: omega = (Au)^H u / ||Au||_2^2, the
/// minimizer of ||u - omega*Au||_2. With kappa > 0 the Sleijpen-van der
/// Vorst safeguard rescales omega so the effective |rho| never drops below
/// kappa: rho = (Au)^H u / (||Au|| ||u||); if 0 < |rho| < kappa then
/// omega *= kappa/|rho|.
template <Scalar S, detail::VectorLike VAu, detail::VectorLike VU>
OmegaResult<S> choose_omega_status(const VAu& Au, const VU& u, double kappa,
                                   OpCounters* ctr = nullptr) {
  OmegaResult<S> res;
  const double den = real_part(dot_hermitian(Au, Au, ctr));
  if (den == 0.0) {
    res.status = OmegaStatus::zero_denominator;
    return res;
  }
  const S num = dot_hermitian(Au, u, ctr);
  res.omega = num / den;
  const double norm_prod = std::sqrt(den) * norm2(u);
  res.rho_abs = norm_prod > 0.0 ? std::abs(num) / norm_prod : 0.0;
  if (kappa > 0.0 && res.rho_abs < kappa && res.rho_abs != 0.0)
    res.omega *= kappa / res.rho_abs;
  if (res.omega == S{}) res.status = OmegaStatus::omega_zero;
  return res;
}

/// Throwing variant for direct use; the solvers use the status form and map
/// failures to flag -1.
template <Scalar S, detail::VectorLike VAu, detail::VectorLike VU>
OmegaResult<S> choose_omega(const VAu& Au, const VU& u, double kappa,
                            OpCounters* ctr = nullptr) {
  auto res = choose_omega_status<S>(Au, u, kappa, ctr);
  if (res.status == OmegaStatus::zero_denominator) throw ZeroDenominatorError();
  if (res.status == OmegaStatus::omega_zero) throw OmegaBreakdownError();
  return res;
}

}  // namespace mlns

#endif  // MLNS_OMEGA_HPP
