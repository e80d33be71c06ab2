#include <cmath>
#include <map>

#include "doctest.h"
#include "fredman/threesum.hpp"
#include "support.hpp"

using namespace fredman;
using testing_support::mixed_instance;
using testing_support::random_ints;

namespace {

bool brute_has(const std::vector<double>& a) {
  for (double x : a)
    for (double y : a)
      for (double z : a)
        if (x + y + z == 0) return true;
  return false;
}

bool valid(const Witness3& w, const std::vector<double>& a) {
  auto in = [&](double v) { return std::find(a.begin(), a.end(), v) != a.end(); };
  return w.a + w.b + w.c == 0 && in(w.a) && in(w.b) && in(w.c);
}

}  // namespace

TEST_CASE("oracle fixtures") {
  CHECK(oracle_3sum(std::vector<double>{0}).value() == Witness3{0, 0, 0});
  CHECK_FALSE(oracle_3sum(std::vector<double>{1, 2, 3}));
  auto w = oracle_3sum(std::vector<double>{-3, 1, 2});
  REQUIRE(w);
  CHECK(w->a + w->b + w->c == 0);
  CHECK_FALSE(oracle_3sum(std::vector<double>{}));
}

TEST_CASE("quadratic walk") {
  ComparisonLedger ledger;
  std::vector<double> z{0};
  CHECK(solve_quadratic(z, z, z, ledger).size() == 1);
  std::vector<double> a{1}, b{2}, c{-3};
  auto w = solve_quadratic(a, b, c, ledger);
  REQUIRE(w.size() == 1);
  CHECK(w[0] == Witness3{1, 2, -3});

  Rng rng(40);
  for (int trial = 0; trial < 200; ++trial) {
    auto A = random_ints(rng, 40, -30, 30);
    auto B = random_ints(rng, 40, -30, 30);
    auto C = random_ints(rng, 40, -30, 30);
    ComparisonLedger l;
    auto got = solve_quadratic(A, B, C, l);
    CHECK(got == oracle_3sum_all(A, B, C));
    CHECK(l.count_3linear() <= 40u * 80u);
    CHECK(l.max_arity() == 3);
  }
}

TEST_CASE("decision tree fixtures") {
  for (auto kernel : {Kernel::reference, Kernel::serial, Kernel::parallel}) {
    ComparisonLedger ledger;
    DecisionTreeOptions opt;
    opt.kernel = kernel;
    opt.g = 2;
    CHECK(solve_decision_tree(std::vector<double>{-3, 1, 2}, ledger, opt));
    for (std::size_t g = 1; g <= 3; ++g) {
      opt.g = g;
      CHECK_FALSE(solve_decision_tree(std::vector<double>{1, 2, 3}, ledger, opt));
    }
    CHECK_FALSE(solve_decision_tree(std::vector<double>{}, ledger, opt));
    opt.g = 0;
    CHECK(solve_decision_tree(std::vector<double>{0}, ledger, opt));
  }
}

TEST_CASE("decision tree agrees with the oracle for every group size") {
  Rng rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + uniform_below(rng, 64);
    auto a = mixed_instance(rng, n, trial);
    const std::size_t g = 1 + uniform_below(rng, n);
    const bool expect = brute_has(a);
    ComparisonLedger ref_ledger, par_ledger;
    DecisionTreeOptions opt;
    opt.g = g;
    opt.kernel = Kernel::reference;
    DecisionTreeStats st;
    auto w1 = solve_decision_tree(a, ref_ledger, opt, &st);
    CHECK(st.step3_ticks == 0);
    opt.kernel = Kernel::parallel;
    auto w2 = solve_decision_tree(a, par_ledger, opt, &st);
    CHECK(st.step3_ticks == 0);
    REQUIRE(w1.has_value() == expect);
    REQUIRE(w2.has_value() == expect);
    if (expect) {
      CHECK(valid(*w1, a));
      CHECK(*w1 == *w2);
    }
    // The batched kernel replays the literal walk tick for tick.
    CHECK(ref_ledger.counts() == par_ledger.counts());
  }
}

TEST_CASE("tick budget at the default group size") {
  Rng rng(17);
  double worst = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + uniform_below(rng, 63);
    auto a = mixed_instance(rng, n, trial);
    ComparisonLedger ledger;
    solve_decision_tree(a, ledger);
    const double nn = static_cast<double>(n);
    const double ratio = static_cast<double>(ledger.total()) / (std::pow(nn, 1.5) * std::sqrt(std::log2(nn + 2)));
    worst = std::max(worst, ratio);
  }
  MESSAGE("worst ticks / n^1.5 sqrt(log n) = " << worst);
  CHECK(worst <= 20.0);
}

TEST_CASE("membership probes stay within the binary-search bound") {
  Rng rng(8);
  auto a = random_ints(rng, 300, -(1LL << 30), 1LL << 30);
  ComparisonLedger ledger;
  DecisionTreeOptions opt;
  opt.g = 12;
  DecisionTreeStats st;
  solve_decision_tree(a, ledger, opt, &st);
  const auto probes = ledger.count_3linear() - st.queries;  // one walk tick per failed query
  const double per = static_cast<double>(probes) / static_cast<double>(st.queries);
  CHECK(per <= std::floor(std::log2(144.0)) + 1);
}

TEST_CASE("walk invariant: a witness inside [lo, hi] is never skipped") {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 4 + uniform_below(rng, 40);
    auto raw = mixed_instance(rng, n, trial);
    ComparisonLedger ledger;
    const std::size_t g = 1 + uniform_below(rng, 6);
    auto setup = prepare_one_set(raw, g, ledger);
    const auto& a = setup.rows;
    // For key k, the witness pairs (x <= y <= k); their group pairs must stay reachable.
    auto reachable = [&](std::size_t k, std::size_t lo, std::size_t hi) {
      bool any = false, inside = false;
      for (std::size_t x = 0; x <= k; ++x)
        for (std::size_t y = x; y <= k; ++y)
          if (a[x] + a[y] + a[k] == 0) {
            any = true;
            if (x / g >= lo && y / g <= hi) inside = true;
          }
      return !any || inside;
    };
    DecisionTreeOptions opt;
    opt.g = g;
    opt.kernel = Kernel::reference;
    opt.observer = [&](std::size_t k, std::size_t lo, std::size_t hi) { CHECK(reachable(k, lo, hi)); };
    solve_decision_tree(setup, ledger, opt, nullptr);
  }
}

TEST_CASE("three-set form") {
  Rng rng(10);
  for (int trial = 0; trial < 200; ++trial) {
    auto A = random_ints(rng, 1 + uniform_below(rng, 30), -40, 40);
    auto B = random_ints(rng, 1 + uniform_below(rng, 30), -40, 40);
    auto C = random_ints(rng, 1 + uniform_below(rng, 30), -40, 40);
    ComparisonLedger ledger;
    DecisionTreeOptions opt;
    opt.g = 1 + uniform_below(rng, 8);
    auto w = solve_decision_tree(A, B, C, ledger, opt);
    REQUIRE(w.has_value() == oracle_3sum(A, B, C).has_value());
    if (w) CHECK(w->a + w->b + w->c == 0);
  }
}
