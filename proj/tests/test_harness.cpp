#include <cmath>
#include <sstream>

#include "doctest.h"
#include "fredman/harness.hpp"
#include "fredman/threesum.hpp"

using namespace fredman;
using namespace fredman::harness;

TEST_CASE("names round-trip") {
  for (auto p : {Problem::threesum, Problem::ldt, Problem::tmp, Problem::zerotri, Problem::conv})
    CHECK(parse_problem(to_string(p)) == p);
  for (auto g : {Generator::uniform, Generator::planted, Generator::duplicate_heavy, Generator::integer_universe})
    CHECK(parse_generator(to_string(g)) == g);
  CHECK_THROWS_AS(parse_problem("4sum"), std::invalid_argument);
  CHECK_THROWS_AS(parse_generator("gaussian"), std::invalid_argument);
}

TEST_CASE("generator fixtures") {
  auto planted = generate(Problem::threesum, 10, Generator::planted, 7);
  CHECK(planted.values.size() == 10);
  CHECK(oracle_3sum(planted.values).has_value());

  // Values up to 2^40 in magnitude: a random zero triple is essentially impossible.
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed)
    hits += oracle_3sum(generate(Problem::threesum, 10, Generator::uniform, seed).values).has_value();
  CHECK(hits == 0);

  for (auto p : {Problem::threesum, Problem::ldt, Problem::tmp, Problem::zerotri, Problem::conv}) {
    for (auto g : {Generator::uniform, Generator::planted, Generator::duplicate_heavy, Generator::integer_universe}) {
      const auto a = generate(p, 9, g, 11, 5);
      const auto b = generate(p, 9, g, 11, 5);
      CHECK(a.values == b.values);
      CHECK(a.A == b.A);
      CHECK(a.T == b.T);
      CHECK(a.graph.edges.size() == b.graph.edges.size());
      CHECK(a.size() == 9);
    }
  }
}

TEST_CASE("planted instances always hold a witness") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    for (auto p : {Problem::threesum, Problem::ldt, Problem::tmp, Problem::zerotri, Problem::conv}) {
      const std::size_t n = 1 + seed % 12;
      const auto inst = generate(p, n, Generator::planted, seed, 3);
      if (p == Problem::zerotri && n < 3) continue;
      CHECK_MESSAGE(oracle_decision(inst), to_string(p) << " n=" << n << " seed=" << seed);
    }
  }
}

TEST_CASE("empty instances: every solver says none") {
  for (auto p : {Problem::threesum, Problem::ldt, Problem::tmp, Problem::zerotri, Problem::conv}) {
    const auto inst = generate(p, 0, Generator::planted, 1, 3);
    CHECK(inst.size() == 0);
    for (const auto& algo : algorithms(p)) {
      const auto r = run_one(inst, algo, {});
      CHECK_MESSAGE(!r.found, to_string(p) << '/' << algo);
    }
  }
}

TEST_CASE("every algorithm agrees with its oracle on small instances") {
  for (auto p : {Problem::threesum, Problem::ldt, Problem::tmp, Problem::zerotri, Problem::conv}) {
    for (auto g : {Generator::uniform, Generator::planted, Generator::duplicate_heavy, Generator::integer_universe}) {
      for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto inst = generate(p, p == Problem::ldt ? 6 : 14, g, seed, 3);
        RunParams params;
        params.seed = seed;
        for (const auto& algo : algorithms(p)) {
          RunRecord r;
          CHECK_NOTHROW(r = run_one(inst, algo, params));
          CHECK(r.problem == to_string(p));
          CHECK(r.algo == algo);
        }
      }
    }
  }
}

TEST_CASE("cross-check reports disagreement") {
  const auto inst = generate(Problem::threesum, 10, Generator::planted, 7);
  RunRecord liar;
  liar.problem = "3sum";
  liar.algo = "dt";
  liar.found = false;
  CHECK_THROWS_AS(cross_check(inst, liar), OracleMismatch);
  liar.found = true;
  CHECK_NOTHROW(cross_check(inst, liar));
  OracleCaps small;
  small.cap[Problem::threesum] = 5;
  liar.found = false;
  CHECK_NOTHROW(cross_check(inst, liar, small));
}

TEST_CASE("run_one rejects unknown algorithms and infeasible parameters") {
  const auto inst = generate(Problem::threesum, 20, Generator::uniform, 1);
  CHECK_THROWS_AS(run_one(inst, "fft", {}), std::invalid_argument);
  RunParams bad;
  bad.g = 9;
  CHECK_THROWS_AS(run_one(inst, "subq-det", bad), std::invalid_argument);
}

TEST_CASE("experiments are ordered and reproducible") {
  ExperimentConfig c;
  c.problem = Problem::threesum;
  c.algos = {"quadratic", "dt", "subq-rand"};
  c.sizes = {8, 16, 32};
  c.trials = 3;
  c.seed = 5;
  c.generator = Generator::integer_universe;
  c.jobs = 4;
  const auto a = run_experiment(c);
  REQUIRE(a.size() == 27);
  for (std::size_t t = 0; t < a.size(); ++t) {
    CHECK(a[t].n == c.sizes[t / 9]);
    CHECK(a[t].algo == c.algos[t % 3]);
    CHECK(a[t].seed == trial_seed(5, a[t].n, (t % 9) / 3));
  }
  c.jobs = 1;
  const auto b = run_experiment(c);
  CHECK(csv_without_wall_time(a) == csv_without_wall_time(b));

  c.sizes = {16, 8};
  CHECK_THROWS_AS(run_experiment(c), std::invalid_argument);
  c.sizes = {8};
  c.trials = 0;
  CHECK_THROWS_AS(run_experiment(c), std::invalid_argument);
  c.trials = 1;
  c.algos = {"nope"};
  CHECK_THROWS_AS(run_experiment(c), std::invalid_argument);
}

TEST_CASE("csv round-trip") {
  ExperimentConfig c;
  c.problem = Problem::zerotri;
  c.algos = {"sparse", "dense-dt"};
  c.sizes = {6, 12};
  c.trials = 2;
  c.generator = Generator::planted;
  const auto rows = run_experiment(c);
  std::stringstream ss;
  write_csv(ss, rows);
  const std::string text = ss.str();
  CHECK(text.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(read_csv(ss) == rows);
  std::istringstream bad("problem,algo\n");
  CHECK_THROWS_AS(read_csv(bad), std::invalid_argument);
}

TEST_CASE("keyfile parsing") {
  std::istringstream in(
      "# schedule\n"
      "problem = ldt\n"
      "algos = [oracle, dt]\n"
      "sizes = 4, 6, 8\n"
      "trials = 2   # per size\n"
      "seed = 9\n"
      "generator = \"planted\"\n"
      "k = 5\n"
      "g = 3\n"
      "oracle_cap = 8\n");
  const auto c = parse_keyfile(in);
  CHECK(c.problem == Problem::ldt);
  CHECK(c.algos == std::vector<std::string>{"oracle", "dt"});
  CHECK(c.sizes == std::vector<std::size_t>{4, 6, 8});
  CHECK(c.trials == 2);
  CHECK(c.seed == 9);
  CHECK(c.generator == Generator::planted);
  CHECK(c.ldt_k == 5);
  CHECK(c.params.g == 3);
  CHECK(c.caps.cap.at(Problem::ldt) == 8);
  const auto rows = run_experiment(c);
  CHECK(rows.size() == 12);
  for (const auto& r : rows) CHECK(r.found);

  std::istringstream unknown("color = red\n");
  CHECK_THROWS_AS(parse_keyfile(unknown), std::invalid_argument);
  std::istringstream garbled("sizes = 4, x\n");
  CHECK_THROWS_AS(parse_keyfile(garbled), std::invalid_argument);
}

TEST_CASE("exponent fit") {
  std::vector<std::pair<double, double>> quad, flat, cube;
  for (double n : {16.0, 32.0, 64.0, 128.0}) {
    quad.emplace_back(n, 3 * n * n);
    flat.emplace_back(n, 42);
    cube.emplace_back(n, n * n * n * (1 + 0.01 * std::sin(n)));
  }
  CHECK(fit_points(quad).slope == doctest::Approx(2.0));
  CHECK(fit_points(flat).slope == doctest::Approx(0.0));
  const auto c = fit_points(cube);
  CHECK(c.slope == doctest::Approx(3.0).epsilon(0.01));
  CHECK(c.ci_low <= c.slope);
  CHECK(c.ci_high >= c.slope);
  CHECK(std::isnan(fit_points({{4, 10}, {8, 40}}).ci_low));
  CHECK_THROWS_AS(fit_points({{8, 10}, {8, 40}}), std::invalid_argument);

  // Medians over trials, per algorithm.
  std::vector<RunRecord> rows;
  for (std::size_t n : {10, 20, 40}) {
    for (std::uint64_t t : {1, 100, 3}) {
      RunRecord r;
      r.problem = "3sum";
      r.algo = "a";
      r.n = n;
      r.ticks3 = t == 100 ? 1'000'000 : n * n;
      rows.push_back(r);
    }
  }
  const auto fits = fit_exponent(rows);
  REQUIRE(fits.size() == 1);
  CHECK(fits[0].algo == "3sum/a");
  CHECK(fits[0].slope == doctest::Approx(2.0));
  rows.resize(3);
  CHECK_THROWS_AS(fit_exponent(rows), std::invalid_argument);
}
