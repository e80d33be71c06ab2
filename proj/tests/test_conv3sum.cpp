#include <set>

#include "doctest.h"
#include "fredman/conv3sum.hpp"
#include "support.hpp"

using namespace fredman;
using testing_support::random_ints;

TEST_CASE("oracle fixtures") {
  CHECK(oracle_conv3sum(std::vector<double>{0}) == ConvWitness{0, 0});
  CHECK_FALSE(oracle_conv3sum(std::vector<double>{1, 2, 3}));
  // (1, 2) is a witness too, but (1, 1) comes first.
  CHECK(oracle_conv3sum(std::vector<double>{5, 1, 2, 3}) == ConvWitness{1, 1});
  CHECK(oracle_conv3sum(std::vector<double>{9, 2, 5, 7}) == ConvWitness{1, 2});
  CHECK_FALSE(oracle_conv3sum(std::vector<double>{}));
}

TEST_CASE("antidiagonal segments cover each antidiagonal exactly") {
  for (std::size_t n : {1, 7, 16, 33}) {
    for (std::size_t g : {1, 2, 4, 8}) {
      for (std::size_t k = 0; k < n; ++k) {
        std::set<std::pair<std::uint32_t, std::uint32_t>> got;
        std::set<std::uint32_t> rows, cols;
        auto segs = antidiagonal_segments(n, g, k);
        CHECK(segs.size() <= 2 * (n + g - 1) / g);
        for (const auto& s : segs) {
          for (const auto& c : s.cells) {
            CHECK(c.row / g == s.p);
            CHECK(c.col / g == s.q);
            CHECK(got.insert({c.row, c.col}).second);
            CHECK(rows.insert(c.row).second);
            CHECK(cols.insert(c.col).second);
          }
        }
        std::set<std::pair<std::uint32_t, std::uint32_t>> want;
        for (std::size_t i = 0; i <= k; ++i)
          if (k - i < n) want.insert({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(k - i)});
        CHECK(got == want);
      }
      CHECK(antidiagonal_segments(n, g, n).empty());
    }
  }
}

TEST_CASE("blocked solver") {
  ComparisonLedger ledger;
  CHECK(solve_conv_blocked(std::vector<double>{5, 1, 2, 3}, 1, ledger) == ConvWitness{1, 1});
  CHECK_FALSE(solve_conv_blocked(std::vector<double>{}, 2, ledger));
  CHECK_THROWS_AS(solve_conv_blocked(std::vector<double>{1}, 0, ledger), std::invalid_argument);

  Rng rng(51);
  auto planted = random_ints(rng, 64, -(1LL << 30), 1LL << 30);
  planted[40] = planted[13] + planted[27];
  auto w = solve_conv_blocked(planted, 4, ledger);
  REQUIRE(w);
  CHECK(planted[w->first] + planted[w->second] == planted[w->first + w->second]);

  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + uniform_below(rng, 128);
    const std::int64_t range = trial % 3 == 0 ? 8 : trial % 3 == 1 ? 200 : (1LL << 30);
    auto A = random_ints(rng, n, -range, range);
    const std::size_t g = std::size_t{1} << uniform_below(rng, 4);
    ComparisonLedger l;
    ConvStats st;
    auto got = solve_conv_blocked(A, g, l, &st);
    REQUIRE(got == oracle_conv3sum(A));
    // Box orders come from the sorted differences alone.
    CHECK(st.box_sort_ticks == 0);
  }
}
