#include "fredman/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "fredman/conv3sum.hpp"
#include "fredman/rng.hpp"
#include "fredman/subquadratic.hpp"
#include "fredman/threesum.hpp"

namespace fredman::harness {

namespace {

constexpr std::int64_t kBig = std::int64_t{1} << 40;

const std::map<Problem, std::string> kProblemNames{{Problem::threesum, "3sum"},
                                                   {Problem::ldt, "ldt"},
                                                   {Problem::tmp, "tmp"},
                                                   {Problem::zerotri, "zerotri"},
                                                   {Problem::conv, "conv"}};
const std::map<Generator, std::string> kGeneratorNames{
    {Generator::uniform, "uniform"},
    {Generator::planted, "planted"},
    {Generator::duplicate_heavy, "duplicate-heavy"},
    {Generator::integer_universe, "integer-universe"}};

double draw(Rng& rng, std::int64_t range) {
  return static_cast<double>(uniform_int(rng, -range, range));
}

// n values for the one-dimensional problems; planting is done by the caller.
std::vector<double> draw_values(Rng& rng, std::size_t n, Generator mode) {
  std::vector<double> v(n);
  switch (mode) {
    case Generator::uniform:
    case Generator::planted:
      for (auto& x : v) x = draw(rng, kBig);
      break;
    case Generator::integer_universe:
      for (auto& x : v) x = draw(rng, 4 * static_cast<std::int64_t>(std::max<std::size_t>(n, 1)));
      break;
    case Generator::duplicate_heavy: {
      std::vector<double> pool(std::max<std::size_t>(1, n / 4));
      for (auto& x : pool) x = draw(rng, kBig);
      for (auto& x : v) x = pool[uniform_below(rng, pool.size())];
      break;
    }
  }
  return v;
}

void plant_threesum(std::vector<double>& v, Rng& rng) {
  const std::size_t n = v.size();
  if (n == 0) return;
  if (n == 1) {
    v[0] = 0;
  } else if (n == 2) {
    v[1] = -2 * v[0];
  } else {
    v[n - 1] = -(v[0] + v[1]);
  }
  shuffle(v, rng);
}

void plant_conv(std::vector<double>& v, Rng& rng) {
  const std::size_t n = v.size();
  if (n == 0) return;
  if (n < 3) {
    v[0] = 0;
    return;
  }
  const std::size_t i = 1 + uniform_below(rng, n - 2);
  const std::size_t j = 1 + uniform_below(rng, n - 1 - i);
  v[i + j] = v[i] + v[j];
}

Instance generate_ldt(std::size_t n, Generator mode, Rng& rng, std::size_t k) {
  Instance inst;
  inst.problem = Problem::ldt;
  inst.values = draw_values(rng, n, mode);
  inst.phi.k = k;
  inst.phi.alpha.assign(k + 1, 0.0);
  for (std::size_t i = 1; i <= k; ++i) {
    const double a = static_cast<double>(1 + uniform_below(rng, 3));
    inst.phi.alpha[i] = uniform_below(rng, 2) ? a : -a;
  }
  if (mode == Generator::integer_universe) inst.phi.alpha[0] = draw(rng, 4);
  if (mode == Generator::planted && n > 0) {
    double sum = 0;
    for (std::size_t i = 1; i <= k; ++i) sum += inst.phi.alpha[i] * inst.values[uniform_below(rng, n)];
    inst.phi.alpha[0] = -sum;
  }
  inst.phi.validate();
  return inst;
}

Instance generate_tmp(std::size_t n, Generator mode, Rng& rng) {
  Instance inst;
  inst.problem = Problem::tmp;
  std::vector<double> pool{-3, 0, 2, 7};
  auto entry = [&]() -> double {
    switch (mode) {
      case Generator::integer_universe:
        return draw(rng, 5);
      case Generator::duplicate_heavy:
        return pool[uniform_below(rng, pool.size())];
      default:
        return draw(rng, 1000);
    }
  };
  auto fill = [&](ExtMatrix& M) {
    M = ExtMatrix(n, n);
    for (auto& x : M.data) x = uniform_below(rng, 100) < 15 ? kInf : entry();
  };
  fill(inst.A);
  fill(inst.B);
  inst.T = ExtMatrix(n, n);
  for (auto& x : inst.T.data) {
    const auto r = uniform_below(rng, 100);
    x = r < 10 ? -kInf : r < 15 ? kInf : 2 * entry();
  }
  if (mode == Generator::planted && n > 0) {
    const std::size_t i = uniform_below(rng, n), j = uniform_below(rng, n), k = uniform_below(rng, n);
    inst.A(i, k) = entry();
    inst.B(k, j) = entry();
    inst.T(i, j) = inst.A(i, k) + inst.B(k, j);
  }
  return inst;
}

Instance generate_zerotri(std::size_t n, Generator mode, Rng& rng) {
  Instance inst;
  inst.problem = Problem::zerotri;
  WeightedGraph& G = inst.graph;
  G.n = n;
  const std::size_t pairs = n * (n - (n > 0)) / 2;
  const std::size_t m = std::min(pairs, 3 * n);
  std::vector<double> pool(3);
  for (auto& x : pool) x = draw(rng, std::int64_t{1} << 30);
  auto weight = [&]() -> double {
    switch (mode) {
      case Generator::integer_universe:
        return draw(rng, 3);
      case Generator::duplicate_heavy:
        return pool[uniform_below(rng, pool.size())];
      default:
        return draw(rng, std::int64_t{1} << 30);
    }
  };
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  auto key = [](std::uint32_t a, std::uint32_t b) { return std::pair{std::min(a, b), std::max(a, b)}; };
  if (mode == Generator::planted && n >= 3) {
    const auto t = sample_without_replacement(n, 3, rng);
    const auto a = static_cast<std::uint32_t>(t[0]), b = static_cast<std::uint32_t>(t[1]),
               c = static_cast<std::uint32_t>(t[2]);
    const double w1 = weight(), w2 = weight();
    G.edges.push_back({a, b, w1});
    G.edges.push_back({b, c, w2});
    G.edges.push_back({c, a, -(w1 + w2)});
    seen.insert(key(a, b));
    seen.insert(key(b, c));
    seen.insert(key(c, a));
  }
  while (G.edges.size() < m) {
    const auto u = static_cast<std::uint32_t>(uniform_below(rng, n));
    const auto v = static_cast<std::uint32_t>(uniform_below(rng, n));
    if (u == v || !seen.insert(key(u, v)).second) continue;
    G.edges.push_back({u, v, weight()});
  }
  return inst;
}

bool tmp_hit(const TargetProductResult& r, const ExtMatrix& T) {
  for (std::size_t x = 0; x < T.data.size(); ++x)
    if (std::isfinite(T.data[x]) && r.C.data[x] == T.data[x]) return true;
  return false;
}

std::size_t or_default(std::size_t v, std::size_t fallback) { return v ? v : fallback; }

}  // namespace

std::string to_string(Problem p) { return kProblemNames.at(p); }
std::string to_string(Generator g) { return kGeneratorNames.at(g); }

Problem parse_problem(const std::string& s) {
  for (const auto& [p, name] : kProblemNames)
    if (name == s) return p;
  throw std::invalid_argument("unknown problem '" + s + "'");
}

Generator parse_generator(const std::string& s) {
  for (const auto& [g, name] : kGeneratorNames)
    if (name == s) return g;
  throw std::invalid_argument("unknown generator '" + s + "'");
}

std::size_t Instance::size() const {
  switch (problem) {
    case Problem::tmp:
      return A.rows;
    case Problem::zerotri:
      return graph.n;
    default:
      return values.size();
  }
}

Instance generate(Problem problem, std::size_t n, Generator mode, std::uint64_t seed, std::size_t ldt_k) {
  Rng rng(mix_seed(seed, static_cast<std::uint64_t>(problem)));
  switch (problem) {
    case Problem::threesum: {
      Instance inst;
      inst.values = draw_values(rng, n, mode);
      if (mode == Generator::planted) plant_threesum(inst.values, rng);
      return inst;
    }
    case Problem::conv: {
      Instance inst;
      inst.problem = Problem::conv;
      inst.values = draw_values(rng, n, mode);
      if (mode == Generator::planted) plant_conv(inst.values, rng);
      return inst;
    }
    case Problem::ldt:
      return generate_ldt(n, mode, rng, ldt_k);
    case Problem::tmp:
      return generate_tmp(n, mode, rng);
    case Problem::zerotri:
      return generate_zerotri(n, mode, rng);
  }
  throw std::logic_error("unreachable");
}

const std::vector<std::string>& algorithms(Problem p) {
  static const std::map<Problem, std::vector<std::string>> table{
      {Problem::threesum,
       {"oracle", "quadratic", "dt", "dt-serial", "dt-reference", "simple", "subq-det", "subq-rand"}},
      {Problem::ldt, {"oracle", "dt", "dt-serial"}},
      {Problem::tmp, {"trivial", "dt", "dominance", "sampled"}},
      {Problem::zerotri,
       {"oracle", "dense-trivial", "dense-dt", "dense-dominance", "dense-sampled", "sparse", "core"}},
      {Problem::conv, {"oracle", "blocked"}},
  };
  return table.at(p);
}

bool oracle_decision(const Instance& inst) {
  switch (inst.problem) {
    case Problem::threesum:
      return oracle_3sum(inst.values).has_value();
    case Problem::ldt:
      return oracle_kldt(inst.phi, inst.values, std::numeric_limits<std::size_t>::max());
    case Problem::tmp:
      return inst.size() > 0 && tmp_hit(target_min_plus_trivial(inst.A, inst.B, inst.T), inst.T);
    case Problem::zerotri:
      return oracle_zero_triangle(inst.graph).has_value();
    case Problem::conv:
      return oracle_conv3sum(inst.values).has_value();
  }
  throw std::logic_error("unreachable");
}

RunRecord run_one(const Instance& inst, const std::string& algo, const RunParams& params,
                  const OracleCaps& caps) {
  const auto& known = algorithms(inst.problem);
  if (std::find(known.begin(), known.end(), algo) == known.end())
    throw std::invalid_argument("unknown algorithm '" + algo + "' for " + to_string(inst.problem));

  RunRecord rec;
  rec.problem = to_string(inst.problem);
  rec.algo = algo;
  rec.n = inst.size();
  rec.seed = params.seed;
  ComparisonLedger ledger;
  const auto start = std::chrono::steady_clock::now();

  switch (inst.problem) {
    case Problem::threesum: {
      const auto& a = inst.values;
      if (algo == "oracle") {
        rec.found = oracle_3sum(a).has_value();
      } else if (algo == "quadratic") {
        rec.found = !solve_quadratic(a, a, a, ledger, true).empty();
      } else if (algo == "simple") {
        rec.g = or_default(params.g, 2);
        rec.found = solve_subquadratic_simple(a, rec.g, 0.5, ledger).has_value();
      } else if (algo == "subq-det" || algo == "subq-rand") {
        SubquadraticParams sp;
        sp.mode = algo == "subq-det" ? PointSetMode::deterministic : PointSetMode::randomized;
        if (params.g) sp.g = params.g;
        if (params.s) sp.s = params.s;
        if (params.q) sp.q = params.q;
        if (params.p) sp.p = params.p;
        sp.seed = params.seed;
        SubquadraticStats st;
        rec.found = solve_subquadratic(a, sp, ledger, &st).has_value();
        rec.g = st.g;
        rec.s = st.s;
        rec.p = st.p;
        rec.q = st.q;
      } else {
        DecisionTreeOptions opt;
        opt.g = params.g;
        opt.kernel = algo == "dt" ? Kernel::parallel : algo == "dt-serial" ? Kernel::serial : Kernel::reference;
        DecisionTreeStats st;
        rec.found = solve_decision_tree(a, ledger, opt, &st).has_value();
        rec.g = st.g;
      }
      break;
    }
    case Problem::ldt: {
      if (algo == "oracle") {
        rec.found = oracle_kldt(inst.phi, inst.values, std::numeric_limits<std::size_t>::max());
      } else {
        KldtStats st;
        rec.found = solve_kldt(inst.phi, inst.values, params.g, ledger, &st,
                               algo == "dt" ? Kernel::parallel : Kernel::serial);
        rec.g = st.g;
      }
      break;
    }
    case Problem::tmp: {
      if (inst.size() == 0) break;
      TargetProductResult r;
      if (algo == "trivial") {
        r = target_min_plus_trivial(inst.A, inst.B, inst.T);
      } else if (algo == "dt") {
        rec.g = or_default(params.g, default_tmp_group_size(inst.A.cols));
        r = target_min_plus_dt(inst.A, inst.B, inst.T, rec.g, ledger);
      } else if (algo == "dominance") {
        rec.g = or_default(params.g, std::min<std::size_t>(4, inst.A.cols));
        r = target_min_plus_dominance(inst.A, inst.B, inst.T, rec.g, ledger);
      } else {
        rec.g = std::min(or_default(params.g, default_tmp_group_size(inst.A.cols)), inst.A.cols);
        Rng rng(params.seed);
        r = target_min_plus_sampled(inst.A, inst.B, inst.T, rec.g, rng, ledger);
      }
      rec.found = tmp_hit(r, inst.T);
      break;
    }
    case Problem::zerotri: {
      const auto& G = inst.graph;
      if (algo == "oracle") {
        rec.found = oracle_zero_triangle(G).has_value();
      } else if (algo == "sparse") {
        SparseStats st;
        rec.found = zero_triangle_sparse(G, params.K, ledger, params.seed, &st).has_value();
        rec.K = st.K;
      } else {
        DenseOptions opt;
        opt.g = params.g;
        opt.seed = params.seed;
        if (algo == "dense-trivial") opt.backend = TmpBackend::trivial;
        if (algo == "dense-dominance") opt.backend = TmpBackend::dominance;
        if (algo == "dense-sampled") opt.backend = TmpBackend::sampled;
        rec.g = params.g;
        rec.found = algo == "core" ? zero_triangle_core(G, 0, ledger, opt).has_value()
                                   : zero_triangle_dense(G, ledger, opt).has_value();
      }
      break;
    }
    case Problem::conv: {
      if (algo == "oracle") {
        rec.found = oracle_conv3sum(inst.values).has_value();
      } else {
        ConvStats st;
        rec.g = or_default(params.g, default_group_size(inst.values.size()));
        rec.found = solve_conv_blocked(inst.values, rec.g, ledger, &st).has_value();
      }
      break;
    }
  }

  rec.wall_ns = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start).count());
  rec.ticks3 = ledger.count_3linear();
  rec.ticks4 = ledger.count_4linear();
  rec.ticksK = ledger.count_other();

  cross_check(inst, rec, caps);
  return rec;
}

void cross_check(const Instance& inst, const RunRecord& rec, const OracleCaps& caps) {
  const auto cap = caps.cap.find(inst.problem);
  if (cap != caps.cap.end() && inst.size() <= cap->second) {
    const bool expect = oracle_decision(inst);
    if (expect != rec.found) {
      std::ostringstream msg;
      msg << "oracle mismatch: " << rec.problem << " algo=" << rec.algo << " n=" << rec.n
          << " seed=" << rec.seed << " solver=" << rec.found << " oracle=" << expect;
      throw OracleMismatch(msg.str());
    }
  }
}

void ExperimentConfig::validate() const {
  if (sizes.empty()) throw std::invalid_argument("no sizes given");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0) throw std::invalid_argument("sizes must be positive");
    if (i > 0 && sizes[i] <= sizes[i - 1]) throw std::invalid_argument("sizes must be strictly ascending");
  }
  if (trials == 0) throw std::invalid_argument("trials must be at least 1");
  if (algos.empty()) throw std::invalid_argument("no algorithms given");
  const auto& known = algorithms(problem);
  for (const auto& a : algos)
    if (std::find(known.begin(), known.end(), a) == known.end())
      throw std::invalid_argument("unknown algorithm '" + a + "' for " + to_string(problem));
  if (problem == Problem::ldt && (ldt_k < 3 || ldt_k % 2 == 0))
    throw std::invalid_argument("k must be odd and at least 3");
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t n, std::size_t trial) {
  return mix_seed(seed, mix_seed(n, trial));
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& config) {
  config.validate();
  const std::size_t per_size = config.trials * config.algos.size();
  const std::size_t tasks = config.sizes.size() * per_size;
  std::vector<RunRecord> rows(tasks);
  std::vector<std::string> errors(tasks);
  std::vector<char> mismatch(tasks, 0);
  const int jobs = config.jobs > 0 ? config.jobs : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs)
  for (std::size_t t = 0; t < tasks; ++t) {
    const std::size_t n = config.sizes[t / per_size];
    const std::size_t trial = (t % per_size) / config.algos.size();
    const std::string& algo = config.algos[t % config.algos.size()];
    RunParams params = config.params;
    params.seed = trial_seed(config.seed, n, trial);
    try {
      const Instance inst = generate(config.problem, n, config.generator, params.seed, config.ldt_k);
      rows[t] = run_one(inst, algo, params, config.caps);
    } catch (const OracleMismatch& e) {
      errors[t] = e.what();
      mismatch[t] = 1;
    } catch (const std::exception& e) {
      errors[t] = e.what();
    }
  }
  for (std::size_t t = 0; t < tasks; ++t) {
    if (mismatch[t]) throw OracleMismatch(errors[t]);
    if (!errors[t].empty()) throw std::invalid_argument(errors[t]);
  }
  return rows;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\"'");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\"'");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(std::string v) {
  v = trim(v);
  if (!v.empty() && v.front() == '[') v = v.substr(1);
  if (!v.empty() && v.back() == ']') v.pop_back();
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!trim(item).empty()) out.push_back(trim(item));
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  unsigned long long x = 0;
  try {
    if (!v.empty() && v.front() == '-') throw std::invalid_argument("negative");
    x = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw std::invalid_argument("bad value for " + key + ": '" + v + "'");
  return x;
}

}  // namespace

ExperimentConfig parse_keyfile(std::istream& in) {
  ExperimentConfig c;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "problem") {
      c.problem = parse_problem(value);
    } else if (key == "algos" || key == "algo") {
      c.algos = split_list(value);
    } else if (key == "sizes") {
      c.sizes.clear();
      for (const auto& s : split_list(value)) c.sizes.push_back(parse_u64(key, s));
    } else if (key == "trials") {
      c.trials = parse_u64(key, value);
    } else if (key == "seed") {
      c.seed = parse_u64(key, value);
    } else if (key == "generator") {
      c.generator = parse_generator(value);
    } else if (key == "csv") {
      c.csv = value;
    } else if (key == "g") {
      c.params.g = parse_u64(key, value);
    } else if (key == "s") {
      c.params.s = parse_u64(key, value);
    } else if (key == "p") {
      c.params.p = parse_u64(key, value);
    } else if (key == "q") {
      c.params.q = parse_u64(key, value);
    } else if (key == "K") {
      c.params.K = parse_u64(key, value);
    } else if (key == "k") {
      c.ldt_k = parse_u64(key, value);
    } else if (key == "jobs") {
      c.jobs = static_cast<int>(parse_u64(key, value));
    } else if (key == "oracle_cap") {
      c.caps.cap[c.problem] = parse_u64(key, value);
    } else {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  return c;
}

void write_csv(std::ostream& out, const std::vector<RunRecord>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.problem << ',' << r.algo << ',' << r.n << ',' << r.seed << ',' << r.g << ',' << r.s << ','
        << r.p << ',' << r.q << ',' << r.K << ',' << (r.found ? 1 : 0) << ',' << r.ticks3 << ','
        << r.ticks4 << ',' << r.ticksK << ',' << r.wall_ns << '\n';
  }
}

std::vector<RunRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kCsvHeader)
    throw std::invalid_argument("CSV header must be: " + std::string(kCsvHeader));
  std::vector<RunRecord> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(trim(item));
    if (f.size() != 14) throw std::invalid_argument("CSV line " + std::to_string(lineno) + ": expected 14 fields");
    RunRecord r;
    r.problem = f[0];
    r.algo = f[1];
    r.n = parse_u64("n", f[2]);
    r.seed = parse_u64("seed", f[3]);
    r.g = parse_u64("g", f[4]);
    r.s = parse_u64("s", f[5]);
    r.p = parse_u64("p", f[6]);
    r.q = parse_u64("q", f[7]);
    r.K = parse_u64("K", f[8]);
    r.found = parse_u64("found", f[9]) != 0;
    r.ticks3 = parse_u64("ticks3", f[10]);
    r.ticks4 = parse_u64("ticks4", f[11]);
    r.ticksK = parse_u64("ticksK", f[12]);
    r.wall_ns = parse_u64("wall_ns", f[13]);
    rows.push_back(r);
  }
  return rows;
}

std::string csv_without_wall_time(const std::vector<RunRecord>& rows) {
  auto copy = rows;
  for (auto& r : copy) r.wall_ns = 0;
  std::ostringstream out;
  write_csv(out, copy);
  return out.str();
}

FitResult fit_points(const std::vector<std::pair<double, double>>& n_ticks) {
  std::set<double> distinct;
  for (const auto& [n, t] : n_ticks) distinct.insert(n);
  if (distinct.size() < 2) throw std::invalid_argument("degenerate fit: fewer than two distinct sizes");
  const double m = static_cast<double>(n_ticks.size());
  double sx = 0, sy = 0;
  std::vector<std::pair<double, double>> xy;
  for (const auto& [n, t] : n_ticks) {
    xy.emplace_back(std::log(n), std::log(std::max(t, 1.0)));
    sx += xy.back().first;
    sy += xy.back().second;
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : xy) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  FitResult f;
  f.sizes = distinct.size();
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (n_ticks.size() > 2) {
    double sse = 0;
    for (const auto& [x, y] : xy) sse += std::pow(y - f.intercept - f.slope * x, 2);
    const double se = std::sqrt(sse / (m - 2) / sxx);
    const boost::math::students_t dist(m - 2);
    const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
    f.ci_low = f.slope - t * se;
    f.ci_high = f.slope + t * se;
  } else {
    f.ci_low = f.ci_high = std::numeric_limits<double>::quiet_NaN();
  }
  return f;
}

std::vector<FitResult> fit_exponent(const std::vector<RunRecord>& rows) {
  std::vector<std::string> order;
  std::map<std::string, std::map<std::size_t, std::vector<double>>> ticks;
  for (const auto& r : rows) {
    const std::string id = r.problem + "/" + r.algo;
    if (!ticks.count(id)) order.push_back(id);
    ticks[id][r.n].push_back(static_cast<double>(r.ticks()));
  }
  std::vector<FitResult> out;
  for (const auto& id : order) {
    std::vector<std::pair<double, double>> pts;
    for (auto& [n, v] : ticks[id]) {
      std::sort(v.begin(), v.end());
      const std::size_t h = v.size() / 2;
      const double med = v.size() % 2 ? v[h] : (v[h - 1] + v[h]) / 2;
      pts.emplace_back(static_cast<double>(n), med);
    }
    FitResult f;
    try {
      f = fit_points(pts);
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("degenerate fit for " + id + ": fewer than two distinct sizes");
    }
    f.algo = id;
    out.push_back(f);
  }
  return out;
}

}  // namespace fredman::harness
