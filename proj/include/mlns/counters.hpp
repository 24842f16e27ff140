#ifndef MLNS_COUNTERS_HPP
#define MLNS_COUNTERS_HPP

#include <cstdint>

namespace mlns {

/// Operation counters accumulated by the linear-algebra kernels when a
/// counter object is attached to the call.
///
/// Residual-norm evaluations are tracked nowhere: `dots` counts only the
/// inner products the algorithms form explicitly (q^H r, q^H w, sweep
/// coefficients, omega numerator/denominator), which is the convention the
/// per-iteration cost accounting uses. Preconditioner solves with M^{-1} and
/// with M^{-H} are kept in separate counters; the Hermitian solves occur only
/// in solver setup.
struct OpCounters {
  std::uint64_t matvecs = 0;
  std::uint64_t hermitian_matvecs = 0;
  std::uint64_t precond_applies = 0;
  std::uint64_t hermitian_precond_applies = 0;
  std::uint64_t dots = 0;
  std::uint64_t saxpys = 0;

  friend bool operator==(const OpCounters&, const OpCounters&) = default;
};

}  // namespace mlns

#endif  // MLNS_COUNTERS_HPP
