#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "fredman/trimatrix.hpp"
#include "support.hpp"

using namespace fredman;

namespace {

ExtMatrix random_matrix(Rng& rng, std::size_t r, std::size_t c, std::int64_t range, double inf_rate) {
  ExtMatrix M(r, c);
  for (auto& v : M.data) {
    v = uniform_unit(rng) < inf_rate ? kInf : static_cast<double>(uniform_int(rng, -range, range));
  }
  return M;
}

ExtMatrix random_target(Rng& rng, std::size_t r, std::size_t c, std::int64_t range) {
  ExtMatrix T(r, c);
  for (auto& v : T.data) {
    const auto roll = uniform_below(rng, 10);
    v = roll == 0 ? -kInf : roll == 1 ? kInf : static_cast<double>(uniform_int(rng, -2 * range, 2 * range));
  }
  return T;
}

// Independent plain (min,+) product.
ExtMatrix min_plus(const ExtMatrix& A, const ExtMatrix& B) {
  ExtMatrix C(A.rows, B.cols, kInf);
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t j = 0; j < B.cols; ++j)
      for (std::size_t k = 0; k < A.cols; ++k) C(i, j) = std::min(C(i, j), A(i, k) + B(k, j));
  return C;
}

// Feasibility, minimality and witness consistency by full scan.
void check_result(const ExtMatrix& A, const ExtMatrix& B, const ExtMatrix& T, const TargetProductResult& r) {
  const auto oracle = target_min_plus_trivial(A, B, T);
  REQUIRE(r.C == oracle.C);
  for (std::size_t i = 0; i < A.rows; ++i) {
    for (std::size_t j = 0; j < B.cols; ++j) {
      const auto k = r.witness(i, j);
      if (k == kNoWitness) {
        CHECK(r.C(i, j) == kInf);
        continue;
      }
      CHECK(A(i, k) + B(k, j) == r.C(i, j));
      CHECK(r.C(i, j) >= T(i, j));
      CHECK(k == oracle.witness(i, j));
    }
  }
}

WeightedGraph random_graph(Rng& rng, std::size_t n, std::size_t m, std::int64_t range, bool plant) {
  WeightedGraph G;
  G.n = n;
  std::set<std::pair<std::uint32_t, std::uint32_t>> used;
  auto add = [&](std::uint32_t u, std::uint32_t v, double w) {
    if (u > v) std::swap(u, v);
    if (u == v || !used.insert({u, v}).second) return false;
    G.edges.push_back({u, v, w});
    return true;
  };
  if (plant && n >= 3) {
    auto pick = sample_without_replacement(n, 3, rng);
    const double a = static_cast<double>(uniform_int(rng, -range, range));
    const double b = static_cast<double>(uniform_int(rng, -range, range));
    add(static_cast<std::uint32_t>(pick[0]), static_cast<std::uint32_t>(pick[1]), a);
    add(static_cast<std::uint32_t>(pick[1]), static_cast<std::uint32_t>(pick[2]), b);
    add(static_cast<std::uint32_t>(pick[0]), static_cast<std::uint32_t>(pick[2]), -(a + b));
  }
  const std::size_t cap = n * (n - 1) / 2;
  for (std::size_t tries = 0; G.edges.size() < std::min(m, cap) && tries < 20 * m; ++tries) {
    add(static_cast<std::uint32_t>(uniform_below(rng, n)), static_cast<std::uint32_t>(uniform_below(rng, n)),
        static_cast<double>(uniform_int(rng, -range, range)));
  }
  return G;
}

}  // namespace

TEST_CASE("trivial product fixtures") {
  ExtMatrix A(1, 1, 2), B(1, 1, 3), T(1, 1, 0);
  auto r = target_min_plus_trivial(A, B, T);
  CHECK(r.C(0, 0) == 5);
  CHECK(r.witness(0, 0) == 0);
  T(0, 0) = 6;
  r = target_min_plus_trivial(A, B, T);
  CHECK(r.C(0, 0) == kInf);
  CHECK(r.witness(0, 0) == kNoWitness);
  CHECK_THROWS_AS(target_min_plus_trivial(ExtMatrix(2, 3), ExtMatrix(2, 2), ExtMatrix(2, 2)), std::invalid_argument);

  Rng rng(41);
  auto M = random_matrix(rng, 10, 10, 50, 0.1);
  auto N = random_matrix(rng, 10, 10, 50, 0.1);
  CHECK(target_min_plus_trivial(M, N, ExtMatrix(10, 10, -kInf)).C == min_plus(M, N));
}

TEST_CASE("strip decision tree") {
  Rng rng(42);
  auto A = random_matrix(rng, 4, 4, 20, 0);
  auto B = random_matrix(rng, 4, 4, 20, 0);
  auto T = random_target(rng, 4, 4, 20);
  ComparisonLedger ledger;
  check_result(A, B, T, target_min_plus_dt(A, B, T, 4, ledger));
  for (std::size_t g : {2, 4, 8}) {
    for (int trial = 0; trial < 5; ++trial) {
      A = random_matrix(rng, 24, 24, 40, trial == 4 ? 0.5 : 0.05);
      B = random_matrix(rng, 24, 24, 40, 0.05);
      T = random_target(rng, 24, 24, 40);
      check_result(A, B, T, target_min_plus_dt(A, B, T, g, ledger));
    }
  }
  A = random_matrix(rng, 7, 13, 5, 0.2);
  B = random_matrix(rng, 13, 3, 5, 0.2);
  T = random_target(rng, 7, 3, 5);
  check_result(A, B, T, target_min_plus_dt(A, B, T, 0, ledger));
}

TEST_CASE("dominance strips") {
  Rng rng(43);
  ComparisonLedger ledger;
  for (std::size_t g : {1, 2, 3}) {
    auto A = random_matrix(rng, 16, 16, g == 3 ? 3 : 30, 0.1);
    auto B = random_matrix(rng, 16, 16, g == 3 ? 3 : 30, 0.1);
    auto T = random_target(rng, 16, 16, 30);
    check_result(A, B, T, target_min_plus_dominance(A, B, T, g, ledger));
  }
  ExtMatrix A(2, 7), B(7, 2), T(2, 2);
  CHECK_THROWS_AS(target_min_plus_dominance(A, B, T, 7, ledger), std::invalid_argument);
}

TEST_CASE("sample hierarchy") {
  Rng rng(44);
  auto h = build_sample_hierarchy(8, 8, rng);
  CHECK(h.levels() == 1);
  h = build_sample_hierarchy(100, 4, rng);
  CHECK(h.levels() == 3);
  for (std::size_t l = 1; l < h.levels(); ++l) {
    for (std::size_t p = 0; p < h.sets[l].size(); ++p) {
      const auto& s = h.sets[l][p];
      const std::size_t lo = p * h.width(l), hi = std::min<std::size_t>(100, lo + h.width(l));
      CHECK(s.size() == std::min<std::size_t>(4, hi - lo));
      for (auto k : s) {
        CHECK(k >= lo);
        CHECK(k < hi);
        const auto& child = h.sets[l - 1][k / h.width(l - 1)];
        CHECK(std::binary_search(child.begin(), child.end(), k));
      }
    }
  }
}

TEST_CASE("sampled witnesses") {
  Rng rng(45);
  ComparisonLedger ledger;
  auto A = random_matrix(rng, 6, 6, 20, 0);
  auto B = random_matrix(rng, 6, 6, 20, 0);
  auto T = random_target(rng, 6, 6, 20);
  check_result(A, B, T, target_min_plus_sampled(A, B, T, 6, rng, ledger));
  std::vector<std::uint64_t> refinements, distance;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    A = random_matrix(rng, 32, 32, 50, 0.05);
    B = random_matrix(rng, 32, 32, 50, 0.05);
    T = random_target(rng, 32, 32, 50);
    Rng r(seed);
    SampledStats st;
    check_result(A, B, T, target_min_plus_sampled(A, B, T, 4, r, ledger, &st));
    refinements.resize(st.levels);
    distance.resize(st.levels);
    for (std::size_t l = 0; l < st.levels; ++l) {
      refinements[l] += st.refinements[l];
      distance[l] += st.hint_distance[l];
    }
  }
  // Targets sitting just above the true product.
  auto base = target_min_plus_trivial(A, B, ExtMatrix(32, 32, -kInf));
  for (std::size_t x = 0; x < T.data.size(); ++x) T.data[x] = base.C.data[x] + static_cast<double>(x % 3) - 1;
  Rng r(99);
  check_result(A, B, T, target_min_plus_sampled(A, B, T, 4, r, ledger));

  for (std::size_t l = 0; l + 1 < refinements.size(); ++l) {
    REQUIRE(refinements[l] > 0);
    const double mean = static_cast<double>(distance[l]) / static_cast<double>(refinements[l]);
    MESSAGE("level " << l << " mean hint distance " << mean);
    CHECK(mean <= 2.0);
  }
}

TEST_CASE("zero triangle fixtures") {
  WeightedGraph G{3, {{0, 1, 1}, {1, 2, 2}, {0, 2, -3}}};
  WeightedGraph H{3, {{0, 1, 1}, {1, 2, 2}, {0, 2, 3}}};
  ComparisonLedger ledger;
  for (auto backend : {TmpBackend::trivial, TmpBackend::dt, TmpBackend::dominance, TmpBackend::sampled}) {
    DenseOptions opt;
    opt.backend = backend;
    auto t = zero_triangle_dense(G, ledger, opt);
    REQUIRE(t);
    CHECK(*t == Triangle{0, 1, 2});
    CHECK_FALSE(zero_triangle_dense(H, ledger, opt));
  }
  CHECK(zero_triangle_sparse(G, 1, ledger));
  CHECK_FALSE(zero_triangle_sparse(H, 1, ledger));
  CHECK(zero_triangle_core(G, 0, ledger));
  CHECK(oracle_zero_triangle(G));
  CHECK_FALSE(oracle_zero_triangle(H));
  CHECK_FALSE(oracle_zero_triangle(WeightedGraph{5, {}}));
  WeightedGraph bip{6, {}};
  for (std::uint32_t a = 0; a < 3; ++a)
    for (std::uint32_t b = 3; b < 6; ++b) bip.edges.push_back({a, b, 0});
  CHECK_FALSE(zero_triangle_sparse(bip, 2, ledger));
  CHECK(all_triangles(bip).empty());
  CHECK_THROWS_AS((WeightedGraph{2, {{0, 0, 1}}}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((WeightedGraph{2, {{0, 1, 1}, {1, 0, 2}}}.validate()), std::invalid_argument);
}

TEST_CASE("orientation") {
  WeightedGraph star{6, {}};
  for (std::uint32_t v = 1; v < 6; ++v) star.edges.push_back({0, v, 1});
  auto o = acyclic_orient(star);
  // The centre goes once at most one leaf remains.
  CHECK(std::find(o.order.begin(), o.order.end(), 0u) - o.order.begin() >= 4);
  CHECK(o.out[0].size() <= 1);
  for (std::uint32_t v = 1; v < 6; ++v) CHECK(o.out[v].size() <= 1);
  WeightedGraph path{4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}}};
  CHECK(acyclic_orient(path).max_outdegree() == 1);
  Rng rng(46);
  for (int trial = 0; trial < 100; ++trial) {
    auto G = random_graph(rng, 5 + uniform_below(rng, 40), 1 + uniform_below(rng, 400), 10, false);
    auto og = acyclic_orient(G);
    CHECK(og.is_acyclic());
    CHECK(static_cast<double>(og.max_outdegree()) < std::sqrt(2.0 * static_cast<double>(G.edges.size())));
    std::size_t arcs = 0;
    for (const auto& out : og.out) arcs += out.size();
    CHECK(arcs == G.edges.size());
  }
}

TEST_CASE("every triangle has exactly one type") {
  Rng rng(47);
  for (int trial = 0; trial < 40; ++trial) {
    auto G = random_graph(rng, 8 + uniform_below(rng, 20), 30 + uniform_below(rng, 120), 10, false);
    auto o = acyclic_orient(G);
    const std::size_t K = 1 + uniform_below(rng, 4);
    auto c = color_out_neighbors(o, G.edges.size(), K, static_cast<std::uint64_t>(trial));
    CHECK(static_cast<double>(c.monochromatic_pairs) <=
          static_cast<double>(G.edges.size() * o.max_outdegree()) / static_cast<double>(K));
    std::set<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t, std::uint32_t>> seen;
    for (const auto& t : all_triangles(G)) {
      auto ty = classify_triangle(o, c.color, t);
      // Type plus third vertex identify the triangle.
      std::uint32_t third = t.a ^ t.b ^ t.c ^ ty.u ^ ty.v;
      CHECK(c.color[third] == ty.kappa);
      CHECK(std::binary_search(o.out[ty.u].begin(), o.out[ty.u].end(), ty.v));
      CHECK(std::binary_search(o.out[ty.v].begin(), o.out[ty.v].end(), third));
      CHECK(seen.insert({ty.u, ty.v, ty.kappa, third}).second);
    }
  }
  // A forced greedy colouring also meets the bound.
  auto G = random_graph(rng, 30, 200, 10, false);
  auto o = acyclic_orient(G);
  auto c = color_out_neighbors(o, G.edges.size(), 3, 1, 0);
  CHECK(c.first_fit);
  CHECK(static_cast<double>(c.monochromatic_pairs) <= static_cast<double>(G.edges.size() * o.max_outdegree()) / 3.0);
}

TEST_CASE("zero triangle solvers agree with enumeration") {
  Rng rng(48);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 4 + uniform_below(rng, 36);
    auto G = random_graph(rng, n, 1 + uniform_below(rng, 400), trial % 3 ? 30 : 5, trial % 2 == 0);
    const bool expect = oracle_zero_triangle(G).has_value();
    auto valid = [&](const std::optional<Triangle>& t) {
      if (!t) return false;
      auto W = G.weight_matrix();
      return W(t->a, t->b) + W(t->b, t->c) + W(t->a, t->c) == 0;
    };
    ComparisonLedger ledger;
    auto s = zero_triangle_sparse(G, 0, ledger, static_cast<std::uint64_t>(trial));
    REQUIRE(s.has_value() == expect);
    if (s) CHECK(valid(s));
    auto core = zero_triangle_core(G, 0, ledger);
    REQUIRE(core.has_value() == expect);
    if (core) CHECK(valid(core));
    for (auto backend : {TmpBackend::dt, TmpBackend::dominance, TmpBackend::sampled}) {
      DenseOptions opt;
      opt.backend = backend;
      opt.seed = static_cast<std::uint64_t>(trial);
      auto d = zero_triangle_dense(G, ledger, opt);
      REQUIRE(d.has_value() == expect);
      if (d) CHECK(valid(d));
    }
  }
}

TEST_CASE("text formats") {
  std::istringstream m("2 3\n1 inf -2\n-inf 0.5 7\n");
  auto M = read_matrix(m);
  CHECK(M.rows == 2);
  CHECK(M(0, 1) == kInf);
  CHECK(M(1, 0) == -kInf);
  CHECK(M(1, 1) == 0.5);
  std::ostringstream out;
  write_matrix(out, M);
  std::istringstream again(out.str());
  CHECK(read_matrix(again) == M);
  std::istringstream bad("1 2\n1 x\n");
  CHECK_THROWS_AS(read_matrix(bad), std::invalid_argument);

  std::istringstream g("3 3\n0 1 1\n1 2 2\n0 2 -3\n");
  auto G = read_graph(g);
  CHECK(G.edges.size() == 3);
  CHECK(oracle_zero_triangle(G));
  std::istringstream dup("2 2\n0 1 1\n1 0 1\n");
  CHECK_THROWS_AS(read_graph(dup), std::invalid_argument);
}
