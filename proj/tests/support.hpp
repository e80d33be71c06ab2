#pragma once

#include <algorithm>
#include <vector>

#include "fredman/rng.hpp"

namespace testing_support {

inline std::vector<double> random_ints(fredman::Rng& rng, std::size_t n, std::int64_t lo,
                                       std::int64_t hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = static_cast<double>(fredman::uniform_int(rng, lo, hi));
  return v;
}

// Mixed one-set 3SUM instances: small universes give witnesses often, large
// ones rarely, and a planted triple forces one.
inline std::vector<double> mixed_instance(fredman::Rng& rng, std::size_t n, int kind) {
  switch (kind % 4) {
    case 0:
      return random_ints(rng, n, -4 * static_cast<std::int64_t>(n), 4 * static_cast<std::int64_t>(n));
    case 1:
      return random_ints(rng, n, -(1LL << 30), 1LL << 30);
    case 2: {
      auto v = random_ints(rng, n, -(1LL << 30), 1LL << 30);
      if (n >= 3) v[n - 1] = -(v[0] + v[1]);
      fredman::shuffle(v, rng);
      return v;
    }
    default: {
      auto pool = random_ints(rng, std::max<std::size_t>(1, n / 4), -6, 6);
      std::vector<double> v(n);
      for (auto& x : v) x = pool[fredman::uniform_below(rng, pool.size())];
      return v;
    }
  }
}

}  // namespace testing_support
