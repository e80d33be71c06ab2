#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fredman/ldt.hpp"
#include "fredman/trimatrix.hpp"

namespace fredman::harness {

enum class Problem { threesum, ldt, tmp, zerotri, conv };
enum class Generator { uniform, planted, duplicate_heavy, integer_universe };

// Names used on the command line and in CSV rows: "3sum", "ldt", "tmp",
// "zerotri", "conv"; "uniform", "planted", "duplicate-heavy",
// "integer-universe". Parsing throws std::invalid_argument.
std::string to_string(Problem p);
std::string to_string(Generator g);
Problem parse_problem(const std::string& s);
Generator parse_generator(const std::string& s);

struct Instance {
  Problem problem = Problem::threesum;
  std::vector<double> values;  // 3sum, conv, and S for ldt
  LinearForm phi;              // ldt
  ExtMatrix A, B, T;           // tmp
  WeightedGraph graph;         // zerotri

  // The size the oracle cap is compared against.
  std::size_t size() const;
};

// Deterministic per (problem, n, mode, seed). All values are integers, so sums
// are exact in double. Planted instances always hold a witness; n is the
// vertex count for zerotri and the matrix side for tmp.
Instance generate(Problem problem, std::size_t n, Generator mode, std::uint64_t seed,
                  std::size_t ldt_k = 3);

// Zero means "solver default". The fields that were actually used are copied
// back into the RunRecord.
struct RunParams {
  std::size_t g = 0, s = 0, p = 0, q = 0, K = 0;
  std::uint64_t seed = 0;
};

struct RunRecord {
  std::string problem;
  std::string algo;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t g = 0, s = 0, p = 0, q = 0, K = 0;
  bool found = false;
  std::uint64_t ticks3 = 0, ticks4 = 0, ticksK = 0;
  std::uint64_t wall_ns = 0;

  std::uint64_t ticks() const { return ticks3 + ticks4 + ticksK; }
  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

// Algorithm ids per problem; the first one is the oracle.
const std::vector<std::string>& algorithms(Problem p);

struct OracleCaps {
  std::map<Problem, std::size_t> cap{{Problem::threesum, 128}, {Problem::ldt, 64},
                                     {Problem::tmp, 32},       {Problem::zerotri, 64},
                                     {Problem::conv, 128}};
};

class OracleMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Runs one algorithm. When instance.size() <= the problem's cap the decision
// is checked against the oracle and OracleMismatch is thrown on disagreement.
// Unknown algorithms and infeasible parameters throw std::invalid_argument.
RunRecord run_one(const Instance& inst, const std::string& algo, const RunParams& params,
                  const OracleCaps& caps = {});

// The oracle's decision.
bool oracle_decision(const Instance& inst);
// Throws OracleMismatch when rec.found disagrees with the oracle; instances
// above the cap are not checked.
void cross_check(const Instance& inst, const RunRecord& rec, const OracleCaps& caps = {});

struct ExperimentConfig {
  Problem problem = Problem::threesum;
  std::vector<std::string> algos;
  std::vector<std::size_t> sizes;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  Generator generator = Generator::uniform;
  std::string csv;  // empty: stdout
  RunParams params;
  std::size_t ldt_k = 3;
  OracleCaps caps;
  int jobs = 0;  // 0: OpenMP default

  // Throws std::invalid_argument unless sizes are positive and strictly
  // ascending, trials >= 1 and every algorithm exists for the problem.
  void validate() const;
};

// Seed of trial t at size n.
std::uint64_t trial_seed(std::uint64_t seed, std::size_t n, std::size_t trial);

// Rows come back ordered by (size, trial, algorithm) whatever order the
// workers finish in.
std::vector<RunRecord> run_experiment(const ExperimentConfig& config);

// "key = value" lines; '#' starts a comment; lists are comma separated and may
// be wrapped in [ ]; strings may be quoted. Unknown keys throw.
ExperimentConfig parse_keyfile(std::istream& in);

inline constexpr const char* kCsvHeader = "problem,algo,n,seed,g,s,p,q,K,found,ticks3,ticks4,ticksK,wall_ns";

void write_csv(std::ostream& out, const std::vector<RunRecord>& rows);
std::vector<RunRecord> read_csv(std::istream& in);
// The CSV text with every wall_ns field replaced by 0.
std::string csv_without_wall_time(const std::vector<RunRecord>& rows);

struct FitResult {
  std::string algo;
  std::size_t sizes = 0;
  double slope = 0;
  double intercept = 0;
  double ci_low = 0;   // 95% interval; NaN with only two sizes
  double ci_high = 0;
};

// Least squares of log(median ticks) against log(n), per algorithm in order of
// first appearance. Throws std::invalid_argument when an algorithm has fewer
// than two distinct sizes.
std::vector<FitResult> fit_exponent(const std::vector<RunRecord>& rows);
FitResult fit_points(const std::vector<std::pair<double, double>>& n_ticks);

}  // namespace fredman::harness
