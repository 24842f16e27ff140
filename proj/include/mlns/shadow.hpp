#ifndef MLNS_SHADOW_HPP
#define MLNS_SHADOW_HPP

#include <stdexcept>

#include "mlns/dense.hpp"
#include "mlns/rng.hpp"
#include "mlns/scalar.hpp"

namespace mlns {

/// How the random shadow (left starting) vectors q_2..q_n are drawn. The
/// first column is always the initial residual r_0.
enum class ShadowStrategy {
  residual_gauss,          // standard Gaussian entries
  residual_gauss_complex,  // complex Gaussian entries (complex field only)
  sign_gauss,              // sign of a Gaussian draw: entries in {-1, +1}
};

/// Builds the N x n shadow matrix Q = [r0, random columns]. Columns after
/// the first are filled column by column from a seeded GaussianSampler, so
/// a fixed (seed, strategy, n) always yields the same matrix.
template <Scalar S>
DenseBlock<S> make_shadow_matrix(const DenseVector<S>& r0, int n,
                                 ShadowStrategy strategy, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("shadow matrix needs n >= 1");
  if (all_zero(r0))
    throw std::invalid_argument("shadow matrix needs a nonzero residual");
  if constexpr (!is_complex_v<S>) {
    if (strategy == ShadowStrategy::residual_gauss_complex)
      throw std::invalid_argument(
          "complex shadow strategy requires a complex system");
  }

  const std::size_t N = r0.size();
  DenseBlock<S> Q(N, static_cast<std::size_t>(n));
  copy_into(r0, Q.col(0));
  GaussianSampler rng(seed);
  for (std::size_t j = 1; j < Q.cols(); ++j) {
    auto col = Q.col(j);
    for (std::size_t i = 0; i < N; ++i) {
      switch (strategy) {
        case ShadowStrategy::residual_gauss:
          col[i] = S{rng.gaussian()};
          break;
        case ShadowStrategy::residual_gauss_complex:
          if constexpr (is_complex_v<S>) col[i] = rng.gaussian_complex();
          break;
        case ShadowStrategy::sign_gauss:
          col[i] = S{rng.sign_gaussian()};
          break;
      }
    }
  }
  return Q;
}

}  // namespace mlns

#endif  // MLNS_SHADOW_HPP
