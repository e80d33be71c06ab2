#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "fredman/contour.hpp"
#include "fredman/core.hpp"
#include "fredman/rng.hpp"
#include "fredman/threesum.hpp"

namespace fredman {

// How a box's sorted order is known when Step 4 reaches it.
struct BoxPlan {
  enum class Kind : std::uint8_t { walk, sorted };
  Kind kind = Kind::walk;
  bool ragged = false;
  bool bad = false;
  std::vector<std::uint32_t> order;    // ascending local cells, when sorted
  std::vector<std::uint32_t> p_index;  // positions of the P cells inside order
  std::vector<std::uint32_t> contour;  // per P cell (P.positions order): contour table index
  std::vector<std::uint32_t> entries;  // per consecutive P pair: catalog pair index
  std::vector<std::uint32_t> orders;   // per consecutive P pair: index into that pair's orders
};

enum class MatchMode {
  cascade,  // contours per P cell, then pairs, then orders of S per used pair
  literal,  // one dominance call per (tau, tau2, pi) with 4g+s-5 coordinates
};

struct MatchResult {
  std::size_t row_groups = 0;
  std::size_t col_groups = 0;
  std::vector<BoxPlan> boxes;  // row-major (i, j)
  std::size_t matched = 0;
  std::size_t bad = 0;
  std::size_t ragged = 0;
  std::size_t dominance_calls = 0;
  std::size_t pairs_reported = 0;

  const BoxPlan& box(std::size_t i, std::size_t j) const { return boxes[i * col_groups + j]; }
};

MatchResult match_boxes(const Step4Setup& setup, const LegalPairCatalog& catalog,
                        ComparisonLedger& ledger, MatchMode mode = MatchMode::cascade);

// Membership test for a box with a plan; walk boxes use the two-pointer walk.
std::optional<Position> search_box_plan(const CartesianSum& sum, std::size_t i, std::size_t j,
                                        const BoxPlan& plan, double target,
                                        ComparisonLedger& ledger, int arity);
std::optional<Position> search_box_walk(const CartesianSum& sum, std::size_t i, std::size_t j,
                                        double target, ComparisonLedger& ledger, int arity);

enum class PermutationSet {
  all,   // every permutation of the g^2 cells
  grid,  // only orders consistent with sorted rows and columns
};

struct SimpleStats {
  std::size_t permutations = 0;
  std::size_t boxes = 0;
  std::size_t matched = 0;
  std::size_t ragged = 0;
  std::size_t max_matches_per_box = 0;
  std::size_t min_matches_per_box = 0;
};

// Every full box gets the one permutation its red/blue points certify.
MatchResult match_boxes_simple(const Step4Setup& setup, ComparisonLedger& ledger,
                               PermutationSet set = PermutationSet::all,
                               SimpleStats* stats = nullptr);

std::optional<Witness3> solve_subquadratic_simple(std::span<const double> A, std::size_t g,
                                                  double epsilon, ComparisonLedger& ledger,
                                                  PermutationSet set = PermutationSet::all,
                                                  SimpleStats* stats = nullptr);

enum class PointSetMode { deterministic, randomized };

struct SubquadraticParams {
  static constexpr std::size_t kAuto = std::numeric_limits<std::size_t>::max();
  std::size_t g = kAuto;
  std::size_t s = kAuto;
  PointSetMode mode = PointSetMode::deterministic;
  std::size_t q = kAuto;  // grid side, deterministic mode
  std::size_t p = kAuto;  // point count, randomized mode
  std::size_t L = 1;      // candidate point sets, randomized mode
  std::size_t M = 64;     // sampled queries per candidate
  double epsilon = 0.5;
  std::uint64_t seed = 0;
  MatchMode match = MatchMode::cascade;
  std::size_t max_catalog_entries = 1'000'000;
};

struct SubquadraticStats {
  std::size_t g = 0, s = 0, p = 0, q = 0;
  std::size_t catalog_pairs = 0;
  std::size_t catalog_entries = 0;
  std::size_t boxes = 0, matched = 0, bad = 0, ragged = 0;
  std::size_t dominance_calls = 0;
  double c_epsilon = 0;
};

std::size_t default_subquadratic_g(PointSetMode mode);

// Pre-pass: record the walk's queries, sample M of them per candidate, and
// return the candidate with the fewest bad sampled boxes (lowest index on ties).
PointSetP select_best_point_set(const Step4Setup& setup, std::span<const PointSetP> candidates,
                                std::size_t s, std::size_t M, Rng& rng, ComparisonLedger& ledger,
                                std::vector<double>* estimates = nullptr);
PointSetP select_best_point_set(std::span<const double> A, std::size_t g, std::size_t p,
                                std::size_t s, std::size_t L, std::size_t M, Rng& rng);

// Catalogs are cached by (g, P, s); safe to call concurrently.
std::shared_ptr<const LegalPairCatalog> cached_catalog(std::size_t g, const PointSetP& P,
                                                       std::size_t s, std::size_t max_entries);

std::optional<Witness3> solve_subquadratic(std::span<const double> A,
                                           const SubquadraticParams& params,
                                           ComparisonLedger& ledger,
                                           SubquadraticStats* stats = nullptr);

}  // namespace fredman
