#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fredman {

// Real value with row/column tie-break tags. Ordering is lexicographic on (u, r, c),
// addition is pointwise. Tags are signed so differences stay exact.
struct TaggedReal {
  double u = 0.0;
  std::int64_t r = 0;
  std::int64_t c = 0;

  friend constexpr TaggedReal operator+(TaggedReal a, TaggedReal b) {
    return {a.u + b.u, a.r + b.r, a.c + b.c};
  }
  friend constexpr TaggedReal operator-(TaggedReal a, TaggedReal b) {
    return {a.u - b.u, a.r - b.r, a.c - b.c};
  }
  friend constexpr TaggedReal operator-(TaggedReal a) { return {-a.u, -a.r, -a.c}; }

  friend constexpr std::strong_ordering operator<=>(const TaggedReal& a, const TaggedReal& b) {
    if (a.u < b.u) return std::strong_ordering::less;
    if (a.u > b.u) return std::strong_ordering::greater;
    if (auto o = a.r <=> b.r; o != 0) return o;
    return a.c <=> b.c;
  }
  friend constexpr bool operator==(const TaggedReal& a, const TaggedReal& b) {
    return a.u == b.u && a.r == b.r && a.c == b.c;
  }
};

inline constexpr TaggedReal untagged(double v) { return {v, 0, 0}; }
inline constexpr TaggedReal row_tagged(double v, std::size_t i) {
  return {v, static_cast<std::int64_t>(i), 0};
}
inline constexpr TaggedReal col_tagged(double v, std::size_t j) {
  return {v, 0, static_cast<std::int64_t>(j)};
}

std::vector<TaggedReal> tag_rows(std::span<const double> values);
std::vector<TaggedReal> tag_cols(std::span<const double> values);

inline constexpr int kMaxArity = 64;

struct LedgerCounts {
  std::array<std::uint64_t, kMaxArity + 1> by_arity{};

  std::uint64_t total() const;
  std::uint64_t at(int arity) const { return by_arity.at(static_cast<std::size_t>(arity)); }
  friend bool operator==(const LedgerCounts&, const LedgerCounts&) = default;
};

// Counts sign queries on linear forms of the inputs, keyed by the number of
// distinct input reals in the form. Owned by one run; shards merge by sum.
class ComparisonLedger {
 public:
  struct Snapshot {
    std::string label;
    LedgerCounts counts;
  };

  void tick(int arity, std::uint64_t n = 1) {
    if (arity < 0 || arity > kMaxArity) throw std::out_of_range("ledger arity out of range");
    counts_.by_arity[static_cast<std::size_t>(arity)] += n;
  }

  std::uint64_t count(int arity) const { return counts_.at(arity); }
  std::uint64_t count_3linear() const { return counts_.at(3); }
  std::uint64_t count_4linear() const { return counts_.at(4); }
  // Every arity except 3 and 4.
  std::uint64_t count_other() const;
  std::map<int, std::uint64_t> count_klinear() const;
  std::uint64_t total() const { return counts_.total(); }
  int max_arity() const;
  const LedgerCounts& counts() const { return counts_; }

  void snapshot(std::string label);
  const std::vector<Snapshot>& snapshots() const { return snapshots_; }
  // Latest snapshot with this label; throws if there is none.
  const Snapshot& snapshot_at(const std::string& label) const;
  std::uint64_t delta(const std::string& from, const std::string& to) const;

  void merge(const ComparisonLedger& shard);
  void reset();

 private:
  LedgerCounts counts_;
  std::vector<Snapshot> snapshots_;
};

// Sign of (a+b) - (c+d), evaluated as (a-c) vs (d-b).
std::strong_ordering compare_sum(const TaggedReal& a, const TaggedReal& b, const TaggedReal& c,
                                 const TaggedReal& d, ComparisonLedger& ledger, int arity = 4);

// Consecutive runs of size g over n items; the last run may be short.
struct Grouping {
  std::size_t n = 0;
  std::size_t g = 1;

  Grouping() = default;
  Grouping(std::size_t n_, std::size_t g_);

  std::size_t count() const { return n == 0 ? 0 : (n + g - 1) / g; }
  std::size_t begin(std::size_t k) const { return k * g; }
  std::size_t size(std::size_t k) const;
  std::size_t last(std::size_t k) const { return begin(k) + size(k) - 1; }
  std::size_t group_of(std::size_t i) const { return i / g; }
  std::size_t offset_of(std::size_t i) const { return i % g; }

  double group_min(std::span<const double> sorted, std::size_t k) const { return sorted[begin(k)]; }
  double group_max(std::span<const double> sorted, std::size_t k) const { return sorted[last(k)]; }
};

std::size_t default_group_size(std::size_t n);

// D = union over groups of (x - y) for x, y in the same group, sorted by raw
// value. Equal raw differences share a rank class; the tag part of a
// difference is recovered from the indices at lookup time.
class DifferenceIndex {
 public:
  struct Entry {
    std::uint32_t group;
    std::uint32_t x;
    std::uint32_t y;
    double value;
    std::uint32_t rank;
  };

  DifferenceIndex() = default;

  std::size_t group_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t group_size(std::size_t group) const { return sizes_.at(group); }
  std::size_t size() const { return ranks_.size(); }

  // Dense class of groups[group][x] - groups[group][y]; equal iff raw differences equal.
  std::uint32_t rank(std::size_t group, std::size_t x, std::size_t y) const {
    return ranks_[offsets_[group] + x * sizes_[group] + y];
  }
  std::size_t class_count() const { return classes_; }
  // k-th element of D in ascending (value, tag) order.
  Entry entry(std::size_t k) const;
  std::vector<Entry> sorted() const;

 private:
  friend struct DifferenceIndexBuilder;

  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> sizes_;
  std::vector<std::uint32_t> ranks_;
  std::vector<std::uint32_t> order_;
  std::vector<double> values_;
  std::size_t classes_ = 0;
};

DifferenceIndex sort_differences(std::span<const std::vector<TaggedReal>> groups,
                                 ComparisonLedger& ledger, int arity = 4);
DifferenceIndex sort_differences(std::span<const std::span<const double>> groups,
                                 ComparisonLedger& ledger, int arity = 4);

struct Position {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  friend auto operator<=>(const Position&, const Position&) = default;
};

using Fragment = std::vector<Position>;

// rows + cols viewed as a matrix with tags (rows[i] + cols[j], i, j). Row and
// column groups are registered in one DifferenceIndex at the given bases.
class CartesianSum {
 public:
  CartesianSum(std::span<const double> rows, Grouping row_groups, std::size_t row_base,
               std::span<const double> cols, Grouping col_groups, std::size_t col_base,
               const DifferenceIndex* index);

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_.size(); }
  double value(Position p) const { return rows_[p.row] + cols_[p.col]; }
  TaggedReal tagged(Position p) const {
    return {value(p), static_cast<std::int64_t>(p.row), static_cast<std::int64_t>(p.col)};
  }
  const Grouping& row_groups() const { return row_groups_; }
  const Grouping& col_groups() const { return col_groups_; }

  // True when the comparison of p and q is answered by the difference index.
  bool resolvable(Position p, Position q) const;
  // Ordering of the tagged sums at p and q. Ticks only when not resolvable.
  std::strong_ordering compare(Position p, Position q, ComparisonLedger& ledger,
                               int arity = 4) const;

 private:
  std::strong_ordering resolve(Position p, Position q) const;

  std::span<const double> rows_;
  std::span<const double> cols_;
  Grouping row_groups_;
  Grouping col_groups_;
  std::size_t row_base_;
  std::size_t col_base_;
  const DifferenceIndex* index_;
};

// Sorts F ascending by tagged sum. Throws std::out_of_range on bad positions.
std::vector<Position> sort_fragment(const CartesianSum& sum, const Fragment& fragment,
                                    ComparisonLedger& ledger, int arity = 4);

// Full box (row group i, column group j) in ascending order, as local cell
// indices x * cols_in_box + y. Rows are merged pairwise.
std::vector<std::uint32_t> sort_box(const CartesianSum& sum, std::size_t i, std::size_t j,
                                    ComparisonLedger& ledger, int arity = 4);

}  // namespace fredman
