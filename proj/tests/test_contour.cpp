#include <algorithm>
#include <bit>
#include <set>

#include "doctest.h"
#include "fredman/contour.hpp"
#include "fredman/threesum.hpp"
#include "support.hpp"

using namespace fredman;
using testing_support::random_ints;

namespace {

struct Box {
  std::vector<double> rows, cols;
  std::size_t g;

  TaggedReal at(std::size_t r, std::size_t c) const {
    return {rows[r] + cols[c], static_cast<std::int64_t>(r), static_cast<std::int64_t>(c)};
  }
  Contour contour_of(const TaggedReal& key) const {
    return compute_contour([&](std::size_t r, std::size_t c) { return at(r, c); }, g, key);
  }
  CellMask le_of(const TaggedReal& key) const {
    CellMask m = 0;
    for (std::size_t r = 0; r < g; ++r)
      for (std::size_t c = 0; c < g; ++c)
        if (!(key < at(r, c))) m |= cell_bit(g, r, c);
    return m;
  }
  // Cells the walk proves <= key: each row up to where it moves down.
  std::vector<char> le_by_rows(const Contour& c) const {
    std::vector<char> out(g * g, 0);
    for (std::size_t t = 0; t + 1 < c.steps.size(); ++t) {
      if (c.steps[t + 1].lo != c.steps[t].lo + 1) continue;
      for (int col = 0; col <= c.steps[t].hi; ++col) out[c.steps[t].lo * g + col] = 1;
    }
    return out;
  }
  std::vector<std::uint32_t> sorted() const {
    std::vector<std::uint32_t> cells(g * g);
    for (std::uint32_t k = 0; k < cells.size(); ++k) cells[k] = k;
    std::sort(cells.begin(), cells.end(),
              [&](auto x, auto y) { return at(x / g, x % g) < at(y / g, y % g); });
    return cells;
  }
};

Box random_box(Rng& rng, std::size_t g, std::int64_t range) {
  Box b{random_ints(rng, g, -range, range), random_ints(rng, g, -range, range), g};
  std::sort(b.rows.begin(), b.rows.end());
  std::sort(b.cols.begin(), b.cols.end());
  return b;
}

// Cells of the block pictured with the two search paths.
Box figure_block() {
  Box b;
  b.g = 10;
  b.rows = {250, 289, 299, 311, 325, 331, 363, 384, 412, 415};
  for (double v : {250, 272, 362, 368, 372, 385, 416, 546, 549, 606}) b.cols.push_back(v - 250);
  return b;
}

}  // namespace

TEST_CASE("extreme keys") {
  Rng rng(1);
  auto b = random_box(rng, 5, 100);
  auto low = b.contour_of({-1e9, 0, 0});
  CHECK(low.moves() == "LLLLL");
  CHECK(low.exit == ContourExit::western);
  CHECK(low.steps.front() == ContourStep{0, 4});
  auto high = b.contour_of({1e9, 0, 0});
  CHECK(high.moves() == "DDDDD");
  CHECK(high.exit == ContourExit::southern);
  CHECK(le_mask(high) == full_mask(5));
  CHECK(le_mask(low) == 0);
}

TEST_CASE("pictured block") {
  auto b = figure_block();
  CHECK(b.at(3, 5).u == 446);
  CHECK(b.at(8, 6).u == 578);
  auto c1 = b.contour_of(b.at(3, 5));
  auto c2 = b.contour_of(b.at(8, 6));
  CHECK(c1.passes(3, 5));
  CHECK(c1.moves_down_at(3, 5));
  CHECK(c2.passes(8, 6));
  CHECK(c2.moves_down_at(8, 6));
  for (auto [r, c] : {std::pair{0, 6}, {1, 5}, {4, 3}, {6, 1}, {9, 1}}) CHECK(c1.passes(r, c));
  for (auto [r, c] : {std::pair{0, 9}, {1, 7}, {2, 6}, {7, 6}, {9, 5}}) CHECK(c2.passes(r, c));
  auto l1 = b.le_by_rows(c1), l2 = b.le_by_rows(c2);
  for (std::size_t k = 0; k < l1.size(); ++k) CHECK(l1[k] <= l2[k]);
}

TEST_CASE("every cell is classified by the contour of a key") {
  Rng rng(2);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t g = 1 + uniform_below(rng, 10);
    const std::int64_t range = trial % 2 ? 5 : 1000;
    auto b = random_box(rng, g, range);
    for (int k = 0; k < 6; ++k) {
      TaggedReal key = k < 3 ? b.at(uniform_below(rng, g), uniform_below(rng, g))
                             : TaggedReal{static_cast<double>(uniform_int(rng, -3 * range, 3 * range)),
                                          static_cast<std::int64_t>(uniform_below(rng, g)), 0};
      auto c = b.contour_of(key);
      CHECK(c.steps.front() == ContourStep{0, static_cast<int>(g) - 1});
      CHECK(c.steps.size() == c.moves().size() + 1);
      auto le = b.le_by_rows(c);
      for (std::size_t r = 0; r < g; ++r)
        for (std::size_t col = 0; col < g; ++col)
          REQUIRE((le[r * g + col] != 0) == !(key < b.at(r, col)));
      if (g <= kMaxMaskSide) CHECK(le_mask(c) == b.le_of(key));
      // Every occurrence of the key's raw value lies on the path.
      for (std::size_t r = 0; r < g; ++r)
        for (std::size_t col = 0; col < g; ++col)
          if (b.at(r, col) == key) CHECK(c.passes(static_cast<int>(r), static_cast<int>(col)));
    }
  }
}

TEST_CASE("contour enumeration") {
  CHECK(all_contours(1).size() == 2);
  CHECK(all_contours(3).size() == 20);
  CHECK(all_contours(4).size() == 70);
  auto all = all_contours(4);
  std::set<std::string> seen;
  for (const auto& c : all) {
    CHECK(contour_from_moves(4, c.moves()).steps == c.steps);
    seen.insert(c.moves());
  }
  CHECK(seen.size() == all.size());
}

TEST_CASE("tripartition of two keys") {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t g = 2 + uniform_below(rng, 7);
    auto b = random_box(rng, g, trial % 2 ? 6 : 500);
    auto order = b.sorted();
    std::size_t x = uniform_below(rng, order.size()), y = uniform_below(rng, order.size());
    if (x > y) std::swap(x, y);
    if (x == y) continue;
    const auto a = order[x], c = order[y];
    auto t = tripartition(b.contour_of(b.at(a / g, a % g)), b.contour_of(b.at(c / g, c % g)), c / g, c % g);
    CHECK((t.R | t.S | t.T) == full_mask(g));
    CHECK((t.R & t.S) == 0);
    CHECK((t.S & t.T) == 0);
    CHECK((t.R & t.T) == 0);
    for (std::size_t k = 0; k < order.size(); ++k) {
      const CellMask bit = CellMask{1} << order[k];
      if (k <= x) CHECK((t.R & bit));
      if (k > x && k < y) CHECK((t.S & bit));
      if (k >= y) CHECK((t.T & bit));
    }
  }
}

TEST_CASE("point sets") {
  auto P = deterministic_point_set(15, 3);
  CHECK(grid_spacing(15, 3) == 4);
  std::set<std::uint32_t> expect{0, 15 * 15 - 1};
  for (std::uint32_t r : {3, 7, 11})
    for (std::uint32_t c : {3, 7, 11}) expect.insert(r * 15 + c);
  CHECK(std::set<std::uint32_t>(P.positions.begin(), P.positions.end()) == expect);
  CHECK(deterministic_point_set(6, 0).p() == 2);
  CHECK(deterministic_point_set(1, 0).p() == 1);
  CHECK_THROWS_AS(deterministic_point_set(4, 3), std::invalid_argument);

  Rng r1(11), r2(11);
  auto a = random_point_set(8, 6, r1);
  auto b = random_point_set(8, 6, r2);
  CHECK(a.positions == b.positions);
  CHECK(a.p() == 6);
  CHECK(a.contains(0, 0));
  CHECK(a.contains(7, 7));
}

TEST_CASE("bad boxes") {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t g = 2 + uniform_below(rng, 6);
    auto b = random_box(rng, g, 1000);
    auto sorted = b.sorted();
    std::vector<std::uint32_t> all(g * g);
    for (std::uint32_t k = 0; k < all.size(); ++k) all[k] = k;
    CHECK_FALSE(is_bad(sorted, make_point_set(g, all), 1));
    CHECK(is_bad(sorted, make_point_set(g, {}), g * g - 3));
    CHECK_FALSE(is_bad(sorted, make_point_set(g, {}), g * g - 2));
  }
}

TEST_CASE("grid point sets leave no bad box") {
  Rng rng(5);
  for (std::size_t g : {4, 6, 9, 12}) {
    for (std::size_t q = 0; q * grid_spacing(g, q) <= g && q <= g; ++q) {
      auto P = deterministic_point_set(g, q);
      const std::size_t s = std::max<std::size_t>(1, grid_gap_bound(g, q));
      for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = g * (1 + uniform_below(rng, 4));
        auto a = random_ints(rng, n, trial % 2 ? -5 : -100000, trial % 2 ? 5 : 100000);
        ComparisonLedger ledger;
        auto setup = prepare_one_set(a, g, ledger);
        auto sum = setup.sum();
        for (std::size_t i = 0; i < setup.row_groups.count(); ++i)
          for (std::size_t j = 0; j < setup.col_groups.count(); ++j)
            if (setup.row_groups.size(i) == g && setup.col_groups.size(j) == g)
              REQUIRE_FALSE(is_bad(sum, i, j, P, s, ledger));
      }
    }
  }
}

TEST_CASE("legal pairs satisfy their definition") {
  for (auto [g, cells, s] : {std::tuple<std::size_t, std::vector<std::uint32_t>, std::size_t>{2, {}, 4},
                             {3, {4}, 3},
                             {4, {5, 10}, 4}}) {
    auto P = make_point_set(g, cells);
    auto cat = enumerate_legal_pairs(g, P, s);
    CHECK(!cat.pairs.empty());
    for (const auto& lp : cat.pairs) {
      const auto& t1 = cat.contours[lp.tau];
      const auto& t2 = cat.contours[lp.tau2];
      CHECK(P.contains(lp.a));
      CHECK(P.contains(lp.b));
      CHECK(t1.moves_down_at(lp.a / g, lp.a % g));
      CHECK(t2.moves_down_at(lp.b / g, lp.b % g));
      // tau never strays below tau2.
      CHECK((le_mask(t1) & ~le_mask(t2)) == 0);
      CHECK((le_mask(t1) & (CellMask{1} << lp.b)) == 0);
      CHECK((lp.parts.S & P.mask()) == 0);
      CHECK(static_cast<std::size_t>(std::popcount(lp.parts.S)) <= s);
      CHECK(lp.s_cells.size() == static_cast<std::size_t>(std::popcount(lp.parts.S)));
      for (const auto& pi : lp.orders) {
        CHECK(pi.size() == lp.s_cells.size());
        for (std::size_t x = 0; x < pi.size(); ++x)
          for (std::size_t y = x + 1; y < pi.size(); ++y)
            CHECK_FALSE((pi[y] / g <= pi[x] / g && pi[y] % g <= pi[x] % g));
      }
      CHECK(cat.find(lp.a, lp.tau, lp.b, lp.tau2).has_value());
    }
  }
  auto one = enumerate_legal_pairs(1, make_point_set(1, {}), 1);
  CHECK(one.pairs.empty());
  CHECK(one.contours.size() == 2);
  CHECK_THROWS_AS(enumerate_legal_pairs(2, make_point_set(2, {}), 0), std::invalid_argument);
}

TEST_CASE("realizable contour pairs are in the catalog") {
  Rng rng(6);
  for (std::size_t g = 2; g <= 6; ++g) {
    const std::size_t q = default_grid_q(g);
    auto P = deterministic_point_set(g, q);
    const std::size_t s = std::max<std::size_t>(1, grid_gap_bound(g, q));
    std::set<std::string> legal;
    for_each_contour_pair(g, P, [&](std::uint32_t a, std::uint32_t t1, std::uint32_t b, std::uint32_t t2,
                                    const Tripartition& parts) {
      if (static_cast<std::size_t>(std::popcount(parts.S)) <= s && !(parts.S & P.mask()))
        legal.insert(std::to_string(a) + "," + std::to_string(t1) + "," + std::to_string(b) + "," +
                     std::to_string(t2));
    });
    auto table = all_contours(g);
    auto index_of = [&](const Contour& c) {
      for (std::size_t t = 0; t < table.size(); ++t)
        if (table[t].steps == c.steps) return t;
      return table.size();
    };
    for (int trial = 0; trial < 300; ++trial) {
      auto b = random_box(rng, g, trial % 3 ? 1000 : 4);
      std::vector<std::uint32_t> in_order;
      for (auto c : b.sorted())
        if (P.contains(c)) in_order.push_back(c);
      for (std::size_t k = 0; k + 1 < in_order.size(); ++k) {
        const auto a = in_order[k], c = in_order[k + 1];
        auto t1 = index_of(b.contour_of(b.at(a / g, a % g)));
        auto t2 = index_of(b.contour_of(b.at(c / g, c % g)));
        CHECK(legal.count(std::to_string(a) + "," + std::to_string(t1) + "," + std::to_string(c) +
                          "," + std::to_string(t2)) == 1);
      }
    }
  }
}

TEST_CASE("linear extensions") {
  std::vector<std::uint32_t> all{0, 1, 2, 3};
  CHECK(grid_linear_extensions(2, all, 100).size() == 2);
  std::vector<std::uint32_t> anti{1, 2};
  CHECK(grid_linear_extensions(2, anti, 100).size() == 2);
  std::vector<std::uint32_t> none;
  CHECK(grid_linear_extensions(3, none, 100).size() == 1);
  std::vector<std::uint32_t> nine(9);
  for (std::uint32_t k = 0; k < 9; ++k) nine[k] = k;
  CHECK(grid_linear_extensions(3, nine, 100).size() == 42);
  CHECK_THROWS_AS(grid_linear_extensions(3, nine, 10), std::length_error);
}
