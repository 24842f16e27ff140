#ifndef MLNS_RNG_HPP
#define MLNS_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace mlns {

/// Seeded standard-normal sampler: mt19937_64 (fully specified by the C++
/// standard, so identical across platforms) feeding a Box-Muller transform.
/// std::normal_distribution is deliberately avoided; its output sequence is
/// implementation-defined and would break cross-platform regression tests.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : gen_(seed) {}

  /// Uniform draw in [0, 1) from the top 53 bits of the generator.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0,1] keeps the log finite
    const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi_v<double> * u2;
    spare_ = mag * std::sin(ang);
    have_spare_ = true;
    return mag * std::cos(ang);
  }

  /// Real part drawn first, then imaginary part.
  std::complex<double> gaussian_complex() {
    const double re = gaussian();
    const double im = gaussian();
    return {re, im};
  }

  /// sign(gaussian()): -1.0 or +1.0
  double sign_gaussian() { return gaussian() < 0.0 ? -1.0 : 1.0; }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace mlns

#endif  // MLNS_RNG_HPP
