#ifndef MLNS_INDEX_MAP_HPP
#define MLNS_INDEX_MAP_HPP

#include <cassert>
#include <cstdint>

namespace mlns {

/// Index functions mapping a global iteration index k to the outer cycle
/// number j = g_index(n, k) and the within-cycle position i = r_index(n, k),
/// so that k = j*n + i with i in {1, ..., n}.
///
/// The floor is taken toward minus infinity (not toward zero), so that
/// g_index(n, 0) = -1 and r_index(n, 0) = n.

constexpr std::int64_t g_index(std::int64_t n, std::int64_t k) {
  assert(n >= 1);
  const std::int64_t t = k - 1;
  std::int64_t q = t / n;
  if (t % n != 0 && t < 0) --q;  // C++ division truncates toward zero
  return q;
}

constexpr std::int64_t r_index(std::int64_t n, std::int64_t k) {
  assert(n >= 1);
  return k - n * g_index(n, k);
}

}  // namespace mlns

#endif  // MLNS_INDEX_MAP_HPP
