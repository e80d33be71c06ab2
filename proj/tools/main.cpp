// fredman_cli: solve one instance, run a benchmark schedule, or fit exponents.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fredman/harness.hpp"

namespace h = fredman::harness;

namespace {

constexpr int kUsage = 1;
constexpr int kMismatch = 2;

std::vector<double> read_values(std::istream& in) {
  std::vector<double> v;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    double x = 0;
    try {
      x = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw std::invalid_argument("not a number: '" + tok + "'");
    v.push_back(x);
  }
  return v;
}

// 3sum and conv: one real per line. ldt: "k a0 .. ak" on the first line, then
// the reals. tmp: matrices A, B, T. zerotri: a graph.
h::Instance read_instance(h::Problem problem, std::istream& in) {
  h::Instance inst;
  inst.problem = problem;
  switch (problem) {
    case h::Problem::threesum:
    case h::Problem::conv:
      inst.values = read_values(in);
      break;
    case h::Problem::ldt: {
      std::string header;
      std::getline(in, header);
      std::istringstream hs(header);
      auto head = read_values(hs);
      if (head.empty() || head[0] < 1 || head[0] != std::floor(head[0]))
        throw std::invalid_argument("ldt input starts with k and the k+1 coefficients");
      inst.phi.k = static_cast<std::size_t>(head[0]);
      inst.phi.alpha.assign(head.begin() + 1, head.end());
      inst.phi.validate();
      inst.values = read_values(in);
      break;
    }
    case h::Problem::tmp:
      inst.A = fredman::read_matrix(in);
      inst.B = fredman::read_matrix(in);
      inst.T = fredman::read_matrix(in);
      if (inst.A.rows != inst.A.cols || inst.A.cols != inst.B.rows || inst.B.rows != inst.B.cols ||
          inst.T.rows != inst.A.rows || inst.T.cols != inst.B.cols)
        throw std::invalid_argument("tmp input needs three n x n matrices");
      break;
    case h::Problem::zerotri:
      inst.graph = fredman::read_graph(in);
      break;
  }
  return inst;
}

void write_instance(std::ostream& out, const h::Instance& inst) {
  out.precision(17);
  switch (inst.problem) {
    case h::Problem::threesum:
    case h::Problem::conv:
      for (double x : inst.values) out << x << '\n';
      break;
    case h::Problem::ldt:
      out << inst.phi.k;
      for (double a : inst.phi.alpha) out << ' ' << a;
      out << '\n';
      for (double x : inst.values) out << x << '\n';
      break;
    case h::Problem::tmp:
      fredman::write_matrix(out, inst.A);
      fredman::write_matrix(out, inst.B);
      fredman::write_matrix(out, inst.T);
      break;
    case h::Problem::zerotri:
      fredman::write_graph(out, inst.graph);
      break;
  }
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"3SUM decision-tree solvers and benchmark harness"};
  app.require_subcommand(1);

  h::RunParams params;
  std::string problem_name, algo, input, csv, config_path, generator_name = "uniform", output;
  std::size_t ldt_k = 3, trials = 1, n = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> sizes;
  std::string algos;
  int jobs = 0;
  std::size_t oracle_cap = 0;

  auto add_params = [&](CLI::App* sub) {
    sub->add_option("--g", params.g, "group size (0: default)");
    sub->add_option("--s", params.s, "between-region bound");
    sub->add_option("--p", params.p, "random point count");
    sub->add_option("--q", params.q, "grid side");
    sub->add_option("--K", params.K, "colour count");
    sub->add_option("--k", ldt_k, "LDT arity");
    sub->add_option("--oracle-cap", oracle_cap, "largest size cross-checked against the oracle");
  };

  auto* solve = app.add_subcommand("solve", "run one algorithm on an input file");
  solve->add_option("problem", problem_name, "3sum | ldt | tmp | zerotri | conv")->required();
  solve->add_option("--algo", algo, "algorithm id")->required();
  solve->add_option("--input", input, "input file, - for stdin")->required();
  solve->add_option("--seed", params.seed, "seed for randomized algorithms");
  add_params(solve);

  auto* gen = app.add_subcommand("generate", "write a generated instance");
  gen->add_option("problem", problem_name)->required();
  gen->add_option("--n", n)->required();
  gen->add_option("--generator", generator_name, "uniform | planted | duplicate-heavy | integer-universe");
  gen->add_option("--seed", seed);
  gen->add_option("--k", ldt_k, "LDT arity");
  gen->add_option("--output", output, "output file (default stdout)");

  auto* bench = app.add_subcommand("bench", "run a size schedule and write CSV");
  bench->add_option("--config", config_path, "keyfile with key = value lines");
  bench->add_option("--problem", problem_name);
  bench->add_option("--algos", algos, "comma-separated algorithm ids");
  bench->add_option("--sizes", sizes)->delimiter(',');
  bench->add_option("--trials", trials);
  bench->add_option("--seed", seed);
  bench->add_option("--generator", generator_name);
  bench->add_option("--csv", csv, "output CSV (default stdout)");
  bench->add_option("--jobs", jobs, "worker threads (0: OpenMP default)");
  add_params(bench);

  auto* fit = app.add_subcommand("fit", "fit log(ticks) against log(n) per algorithm");
  fit->add_option("--csv", csv, "CSV written by bench")->required();

  auto* list = app.add_subcommand("list", "print the algorithm ids per problem");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (*list) {
      for (auto p : {h::Problem::threesum, h::Problem::ldt, h::Problem::tmp, h::Problem::zerotri, h::Problem::conv}) {
        std::cout << h::to_string(p) << ':';
        for (const auto& a : h::algorithms(p)) std::cout << ' ' << a;
        std::cout << '\n';
      }
      return 0;
    }

    if (*solve) {
      const auto problem = h::parse_problem(problem_name);
      h::Instance inst;
      if (input == "-") {
        inst = read_instance(problem, std::cin);
      } else {
        std::ifstream in(input);
        if (!in) throw std::invalid_argument("cannot open " + input);
        inst = read_instance(problem, in);
      }
      h::OracleCaps caps;
      if (oracle_cap) caps.cap[problem] = oracle_cap;
      const auto r = h::run_one(inst, algo, params, caps);
      std::cout << "found=" << (r.found ? "yes" : "no") << " n=" << r.n << " ticks3=" << r.ticks3
                << " ticks4=" << r.ticks4 << " ticksK=" << r.ticksK << " g=" << r.g << " s=" << r.s
                << " p=" << r.p << " q=" << r.q << " K=" << r.K << " wall_ns=" << r.wall_ns << '\n';
      return 0;
    }

    if (*gen) {
      const auto inst = h::generate(h::parse_problem(problem_name), n, h::parse_generator(generator_name), seed, ldt_k);
      if (output.empty()) {
        write_instance(std::cout, inst);
      } else {
        std::ofstream out(output);
        if (!out) throw std::invalid_argument("cannot write " + output);
        write_instance(out, inst);
      }
      return 0;
    }

    if (*bench) {
      h::ExperimentConfig config;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw std::invalid_argument("cannot open " + config_path);
        config = h::parse_keyfile(in);
      }
      // Flags override the keyfile.
      if (!problem_name.empty()) config.problem = h::parse_problem(problem_name);
      if (bench->count("--algos")) config.algos = split_commas(algos);
      if (!sizes.empty()) config.sizes = sizes;
      if (bench->count("--trials")) config.trials = trials;
      if (bench->count("--seed")) config.seed = seed;
      if (bench->count("--generator")) config.generator = h::parse_generator(generator_name);
      if (!csv.empty()) config.csv = csv;
      if (bench->count("--jobs")) config.jobs = jobs;
      if (bench->count("--k")) config.ldt_k = ldt_k;
      if (params.g) config.params.g = params.g;
      if (params.s) config.params.s = params.s;
      if (params.p) config.params.p = params.p;
      if (params.q) config.params.q = params.q;
      if (params.K) config.params.K = params.K;
      if (oracle_cap) config.caps.cap[config.problem] = oracle_cap;
      const auto rows = h::run_experiment(config);
      if (config.csv.empty() || config.csv == "-") {
        h::write_csv(std::cout, rows);
      } else {
        std::ofstream out(config.csv);
        if (!out) throw std::invalid_argument("cannot write " + config.csv);
        h::write_csv(out, rows);
      }
      return 0;
    }

    if (*fit) {
      std::ifstream in(csv);
      if (!in) throw std::invalid_argument("cannot open " + csv);
      for (const auto& f : h::fit_exponent(h::read_csv(in))) {
        std::printf("%s slope=%.4f ci95=[%.4f, %.4f] sizes=%zu\n", f.algo.c_str(), f.slope, f.ci_low,
                    f.ci_high, f.sizes);
      }
      return 0;
    }
  } catch (const h::OracleMismatch& e) {
    std::cerr << e.what() << '\n';
    return kMismatch;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return 0;
}
