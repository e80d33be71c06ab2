#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

#include "fredman/core.hpp"
#include "fredman/rng.hpp"

namespace fredman {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr std::size_t kNoWitness = std::numeric_limits<std::size_t>::max();

// Row-major matrix over the reals extended with +inf (and -inf in targets).
struct ExtMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  ExtMatrix() = default;
  ExtMatrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  friend bool operator==(const ExtMatrix&, const ExtMatrix&) = default;
};

// C(i,j) = min{A(i,k) + B(k,j) finite and >= T(i,j)}, +inf when empty; W
// holds the smallest such k or kNoWitness.
struct TargetProductResult {
  ExtMatrix C;
  std::vector<std::size_t> W;

  std::size_t witness(std::size_t i, std::size_t j) const { return W[i * C.cols + j]; }
};

TargetProductResult target_min_plus_trivial(const ExtMatrix& A, const ExtMatrix& B, const ExtMatrix& T);

// Strips of g columns of A / rows of B; per strip the differences of A rows
// and B columns are sorted once, then every (i, j) binary-searches its strip.
// g = 0 picks ceil(sqrt(s log2(s + 2))) for inner dimension s.
TargetProductResult target_min_plus_dt(const ExtMatrix& A, const ExtMatrix& B, const ExtMatrix& T,
                                       std::size_t g, ComparisonLedger& ledger);

inline constexpr std::size_t kMaxDominanceStrip = 6;

// Per strip, one dominance call per permutation of the strip finds the order
// of every (i, j). Throws std::invalid_argument when g > kMaxDominanceStrip.
TargetProductResult target_min_plus_dominance(const ExtMatrix& A, const ExtMatrix& B,
                                              const ExtMatrix& T, std::size_t g,
                                              ComparisonLedger& ledger);

// Nested samples: level l has intervals [p g 2^l, (p+1) g 2^l) and keeps g
// indices of each (fewer in a short interval), drawn from the level below.
struct SampleHierarchy {
  std::size_t n = 0;
  std::size_t g = 0;
  std::vector<std::vector<std::vector<std::uint32_t>>> sets;  // [level][interval], ascending

  std::size_t levels() const { return sets.size(); }
  std::size_t width(std::size_t level) const { return g << level; }
};

SampleHierarchy build_sample_hierarchy(std::size_t n, std::size_t g, Rng& rng);

struct SampledStats {
  std::size_t levels = 0;
  std::vector<std::uint64_t> refinements;    // per level
  std::vector<std::uint64_t> hint_distance;  // per level, summed rank distance
};

// Square matrices only.
TargetProductResult target_min_plus_sampled(const ExtMatrix& A, const ExtMatrix& B,
                                            const ExtMatrix& T, std::size_t g, Rng& rng,
                                            ComparisonLedger& ledger, SampledStats* stats = nullptr);

std::size_t default_tmp_group_size(std::size_t s);

struct Edge {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
  double w = 0;
};

struct WeightedGraph {
  std::size_t n = 0;
  std::vector<Edge> edges;

  // Throws std::invalid_argument on self-loops, duplicates or bad endpoints.
  void validate() const;
  // Weight matrix with +inf off the edges and on the diagonal.
  ExtMatrix weight_matrix() const;
};

struct Triangle {
  std::uint32_t a = 0, b = 0, c = 0;
  friend bool operator==(const Triangle&, const Triangle&) = default;
};

std::optional<Triangle> oracle_zero_triangle(const WeightedGraph& G);
std::vector<Triangle> all_triangles(const WeightedGraph& G);

enum class TmpBackend { trivial, dt, dominance, sampled };

struct DenseOptions {
  TmpBackend backend = TmpBackend::dt;
  std::size_t g = 0;  // 0: backend default
  std::uint64_t seed = 0;
};

std::optional<Triangle> zero_triangle_dense(const WeightedGraph& G, ComparisonLedger& ledger,
                                            const DenseOptions& opt = {});

struct Orientation {
  std::size_t n = 0;
  std::vector<std::vector<std::uint32_t>> out;  // ascending vertex ids
  std::vector<std::uint32_t> order;             // removal order

  std::size_t max_outdegree() const;
  bool is_acyclic() const;
};

// Repeatedly removes a minimum-degree vertex and orients its remaining edges
// away from it.
Orientation acyclic_orient(const WeightedGraph& G);

struct Coloring {
  std::size_t K = 1;
  std::vector<std::uint32_t> color;
  std::uint64_t monochromatic_pairs = 0;
  std::size_t draws = 0;  // random draws tried; 0 when first-fit was used
  bool first_fit = false;
};

std::uint64_t monochromatic_out_pairs(const Orientation& o, const std::vector<std::uint32_t>& color);
// Seeded random colorings until the pair count is at most m * maxdeg / K, then
// a greedy first-fit fallback that always meets it.
Coloring color_out_neighbors(const Orientation& o, std::size_t m, std::size_t K, std::uint64_t seed,
                             std::size_t max_draws = 8);

struct TriangleType {
  std::uint32_t u = 0;  // source
  std::uint32_t v = 0;  // middle: u -> v -> x
  std::uint32_t kappa = 0;
  friend bool operator==(const TriangleType&, const TriangleType&) = default;
};

TriangleType classify_triangle(const Orientation& o, const std::vector<std::uint32_t>& color,
                               const Triangle& t);

std::size_t default_sparse_K(std::size_t m);

struct SparseStats {
  std::size_t K = 0;
  std::size_t max_outdegree = 0;
  std::size_t differences = 0;
  std::size_t types = 0;
  std::uint64_t monochromatic_pairs = 0;
  bool first_fit = false;
};

std::optional<Triangle> zero_triangle_sparse(const WeightedGraph& G, std::size_t K,
                                             ComparisonLedger& ledger, std::uint64_t seed = 0,
                                             SparseStats* stats = nullptr);

// Vertices of degree < delta are peeled and their out-pairs enumerated; the
// remaining core goes to zero_triangle_dense. delta = 0 picks ceil(sqrt(m)).
std::optional<Triangle> zero_triangle_core(const WeightedGraph& G, std::size_t delta,
                                           ComparisonLedger& ledger, const DenseOptions& opt = {},
                                           std::size_t* core_size = nullptr);

// "r c" then r rows of c values; "inf" and "-inf" are accepted.
ExtMatrix read_matrix(std::istream& in);
void write_matrix(std::ostream& out, const ExtMatrix& M);
// "n m" then m lines "u v w".
WeightedGraph read_graph(std::istream& in);
void write_graph(std::ostream& out, const WeightedGraph& G);

}  // namespace fredman
