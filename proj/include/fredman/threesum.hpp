#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fredman/core.hpp"

namespace fredman {

// a + b + c == 0 over raw doubles.
struct Witness3 {
  double a = 0;
  double b = 0;
  double c = 0;
  friend auto operator<=>(const Witness3&, const Witness3&) = default;
};

std::optional<Witness3> oracle_3sum(std::span<const double> A);
std::optional<Witness3> oracle_3sum(std::span<const double> A, std::span<const double> B,
                                    std::span<const double> C);
// Every distinct value triple (a, b, c) in A x B x C summing to zero, sorted.
std::vector<Witness3> oracle_3sum_all(std::span<const double> A, std::span<const double> B,
                                      std::span<const double> C);

// Arity charged for each kind of sign query.
struct TickArity {
  int sort = 2;        // comparing two inputs
  int difference = 4;  // comparing two elements of D
  int probe = 3;       // cell of a box against a key
  int walk = 3;        // max(A_lo) + min(B_hi) against a key
};

// Two-pointer walk per key; equality advances lo. Returns the distinct value
// triples found (all of them, or only the first when first_only).
std::vector<Witness3> solve_quadratic(std::span<const double> A, std::span<const double> B,
                                      std::span<const double> C, ComparisonLedger& ledger,
                                      bool first_only = false);

enum class WalkForm { one_set, three_set };

// Steps 1 and 2: sorted generators, grouping, and the sorted difference set.
struct Step4Setup {
  WalkForm form = WalkForm::one_set;
  std::vector<double> rows;
  std::vector<double> cols;
  std::vector<double> keys;  // the walk for key c searches for -c
  Grouping row_groups;
  Grouping col_groups;
  std::size_t col_base = 0;  // index of the first column group in `index`
  DifferenceIndex index;

  CartesianSum sum() const {
    return CartesianSum(rows, row_groups, 0, cols, col_groups, col_base, &index);
  }
  std::size_t key_count() const { return keys.size(); }
  // Starting hi for key k; every group for three sets, group_of(k) for one set.
  std::size_t first_hi(std::size_t k) const;
  Witness3 witness(std::size_t k, Position cell) const {
    return {rows[cell.row], cols[cell.col], keys[k]};
  }
};

// A sorted once and used as rows, columns and keys.
Step4Setup prepare_one_set(std::span<const double> A, std::size_t g, ComparisonLedger& ledger,
                           const TickArity& arity = {});
Step4Setup prepare_three_set(std::span<const double> A, std::span<const double> B,
                             std::span<const double> C, std::size_t g, ComparisonLedger& ledger,
                             const TickArity& arity = {});

// Box (lo, hi) searched for key k. Observers see (k, lo, hi) before each search.
using Step4Observer = std::function<void(std::size_t k, std::size_t lo, std::size_t hi)>;
using BoxMembership = std::function<std::optional<Position>(std::size_t lo, std::size_t hi,
                                                            double target, ComparisonLedger&)>;

struct WalkResult {
  std::optional<Witness3> witness;
  std::size_t queries = 0;
};

// The group-level walk with an arbitrary membership test, halting at the
// first hit. Each failed test is followed by one walk comparison.
WalkResult walk_step4(const Step4Setup& setup, const BoxMembership& member, ComparisonLedger& ledger,
                      const TickArity& arity = {}, const Step4Observer& observer = {});

struct BoxQuery {
  std::uint32_t key;
  std::uint32_t lo;
  std::uint32_t hi;
};

// The queries the walk makes when no membership test succeeds, in order.
std::vector<BoxQuery> record_step4_queries(const Step4Setup& setup);

// Three-way binary search for a raw value among ascending box cells.
std::optional<std::uint32_t> search_sorted_cells(const CartesianSum& sum, std::size_t i,
                                                 std::size_t j, std::span<const std::uint32_t> cells,
                                                 double target, ComparisonLedger& ledger, int arity);

enum class Kernel {
  reference,  // literal walk, boxes sorted on first use and cached
  serial,     // batched: record queries, sort each box once, replay
  parallel,   // batched with boxes sorted and searched by OpenMP workers
};

struct DecisionTreeOptions {
  std::size_t g = 0;  // 0 selects default_group_size(n)
  Kernel kernel = Kernel::parallel;
  TickArity arity{};
  Step4Observer observer{};  // reference kernel only
};

struct DecisionTreeStats {
  std::size_t g = 0;
  std::size_t groups = 0;
  std::size_t boxes_sorted = 0;
  std::size_t queries = 0;
  std::uint64_t step3_ticks = 0;  // ledger delta between sorted_D and boxes_sorted
};

// Snapshots "sorted_input", "sorted_D", "boxes_sorted" and "done" are recorded
// on the ledger.
std::optional<Witness3> solve_decision_tree(std::span<const double> A, ComparisonLedger& ledger,
                                            const DecisionTreeOptions& opt = {},
                                            DecisionTreeStats* stats = nullptr);
std::optional<Witness3> solve_decision_tree(std::span<const double> A, std::span<const double> B,
                                            std::span<const double> C, ComparisonLedger& ledger,
                                            const DecisionTreeOptions& opt = {},
                                            DecisionTreeStats* stats = nullptr);
std::optional<Witness3> solve_decision_tree(Step4Setup& setup, ComparisonLedger& ledger,
                                            const DecisionTreeOptions& opt,
                                            DecisionTreeStats* stats);

}  // namespace fredman
