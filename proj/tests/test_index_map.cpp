#include "doctest.h"
#include "mlns/index_map.hpp"

using mlns::g_index;
using mlns::r_index;

TEST_CASE("index functions reproduce the n = 3 table") {
  // k:      0  1  2  3  4  5  6  7  8  9 10 11 12
  const long g[] = {-1, 0, 0, 0, 1, 1, 1, 2, 2, 2, 3, 3, 3};
  const long r[] = {3, 1, 2, 3, 1, 2, 3, 1, 2, 3, 1, 2, 3};
  for (long k = 0; k <= 12; ++k) {
    CHECK(g_index(3, k) == g[k]);
    CHECK(r_index(3, k) == r[k]);
  }
}

TEST_CASE("spot values") {
  CHECK(g_index(3, 4) == 1);
  CHECK(g_index(3, 0) == -1);
  CHECK(r_index(3, 0) == 3);
  CHECK(r_index(3, 7) == 1);
  for (long k = -6; k <= 6; ++k) {
    CHECK(g_index(1, k) == k - 1);
    CHECK(r_index(1, k) == 1);
  }
}

TEST_CASE("floor is toward minus infinity for negative arguments") {
  CHECK(g_index(3, -1) == -1);
  CHECK(g_index(3, -2) == -1);
  CHECK(g_index(3, -3) == -2);
  CHECK(r_index(3, -1) == 2);
  CHECK(r_index(3, -3) == 3);
}

TEST_CASE("decomposition identity k = n*g + r with r in 1..n") {
  for (long n = 1; n <= 16; ++n)
    for (long k = -50; k <= 50; ++k) {
      const long g = g_index(n, k);
      const long r = r_index(n, k);
      CHECK(k == n * g + r);
      CHECK(r >= 1);
      CHECK(r <= n);
    }
}

TEST_CASE("g(jn + i) = j and r(jn + i) = i") {
  for (long n = 1; n <= 8; ++n)
    for (long j = -5; j <= 5; ++j)
      for (long i = 1; i <= n; ++i) {
        CHECK(g_index(n, j * n + i) == j);
        CHECK(r_index(n, j * n + i) == i);
      }
}
