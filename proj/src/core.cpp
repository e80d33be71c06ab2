#include "fredman/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fredman {

std::vector<TaggedReal> tag_rows(std::span<const double> values) {
  std::vector<TaggedReal> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = row_tagged(values[i], i);
  return out;
}

std::vector<TaggedReal> tag_cols(std::span<const double> values) {
  std::vector<TaggedReal> out(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) out[j] = col_tagged(values[j], j);
  return out;
}

std::uint64_t LedgerCounts::total() const {
  std::uint64_t t = 0;
  for (auto c : by_arity) t += c;
  return t;
}

std::uint64_t ComparisonLedger::count_other() const {
  return counts_.total() - counts_.at(3) - counts_.at(4);
}

std::map<int, std::uint64_t> ComparisonLedger::count_klinear() const {
  std::map<int, std::uint64_t> out;
  for (int a = 0; a <= kMaxArity; ++a) {
    if (counts_.at(a) != 0) out[a] = counts_.at(a);
  }
  return out;
}

int ComparisonLedger::max_arity() const {
  for (int a = kMaxArity; a >= 0; --a) {
    if (counts_.at(a) != 0) return a;
  }
  return 0;
}

void ComparisonLedger::snapshot(std::string label) {
  snapshots_.push_back({std::move(label), counts_});
}

const ComparisonLedger::Snapshot& ComparisonLedger::snapshot_at(const std::string& label) const {
  for (auto it = snapshots_.rbegin(); it != snapshots_.rend(); ++it) {
    if (it->label == label) return *it;
  }
  throw std::out_of_range("no ledger snapshot labelled " + label);
}

std::uint64_t ComparisonLedger::delta(const std::string& from, const std::string& to) const {
  return snapshot_at(to).counts.total() - snapshot_at(from).counts.total();
}

void ComparisonLedger::merge(const ComparisonLedger& shard) {
  for (std::size_t a = 0; a < counts_.by_arity.size(); ++a) {
    counts_.by_arity[a] += shard.counts_.by_arity[a];
  }
}

void ComparisonLedger::reset() {
  counts_ = {};
  snapshots_.clear();
}

std::strong_ordering compare_sum(const TaggedReal& a, const TaggedReal& b, const TaggedReal& c,
                                 const TaggedReal& d, ComparisonLedger& ledger, int arity) {
  ledger.tick(arity);
  return (a - c) <=> (d - b);
}

Grouping::Grouping(std::size_t n_, std::size_t g_) : n(n_), g(g_) {
  if (g == 0) throw std::invalid_argument("group size must be positive");
}

std::size_t Grouping::size(std::size_t k) const {
  if (k >= count()) throw std::out_of_range("group index out of range");
  return std::min(g, n - k * g);
}

std::size_t default_group_size(std::size_t n) {
  const double nn = static_cast<double>(n);
  const auto g = static_cast<std::size_t>(std::ceil(std::sqrt(nn * std::log2(nn + 2.0))));
  return std::max<std::size_t>(1, g);
}

struct DifferenceIndexBuilder {
  struct Item {
    double v;
    std::int32_t tr;
    std::int32_t tc;
    std::uint32_t id;
  };

  template <class Get>
  static DifferenceIndex build(std::size_t group_count, const std::vector<std::size_t>& sizes,
                               Get get, ComparisonLedger& ledger, int arity) {
    if (group_count == 0) throw std::invalid_argument("sort_differences needs at least one group");
    DifferenceIndex d;
    d.sizes_ = sizes;
    d.offsets_.assign(group_count + 1, 0);
    for (std::size_t k = 0; k < group_count; ++k) {
      d.offsets_[k + 1] = d.offsets_[k] + sizes[k] * sizes[k];
    }
    const std::size_t total = d.offsets_.back();
    if (total > std::numeric_limits<std::uint32_t>::max()) {
      throw std::length_error("difference set too large");
    }

    std::vector<Item> items(total);
    for (std::size_t k = 0; k < group_count; ++k) {
      const std::size_t s = sizes[k];
      for (std::size_t x = 0; x < s; ++x) {
        const TaggedReal ax = get(k, x);
        for (std::size_t y = 0; y < s; ++y) {
          const TaggedReal diff = ax - get(k, y);
          const auto id = static_cast<std::uint32_t>(d.offsets_[k] + x * s + y);
          items[id] = {diff.u, static_cast<std::int32_t>(diff.r), static_cast<std::int32_t>(diff.c),
                       id};
        }
      }
    }

    std::sort(items.begin(), items.end(), [&](const Item& a, const Item& b) {
      ledger.tick(arity);
      if (a.v != b.v) return a.v < b.v;
      if (a.tr != b.tr) return a.tr < b.tr;
      if (a.tc != b.tc) return a.tc < b.tc;
      return a.id < b.id;
    });

    d.ranks_.resize(total);
    d.order_.resize(total);
    d.values_.resize(total);
    std::uint32_t cls = 0;
    for (std::size_t k = 0; k < total; ++k) {
      if (k > 0) {
        ledger.tick(arity);
        if (items[k].v != items[k - 1].v) ++cls;
      }
      d.ranks_[items[k].id] = cls;
      d.order_[k] = items[k].id;
      d.values_[items[k].id] = items[k].v;
    }
    d.classes_ = total == 0 ? 0 : cls + 1;
    return d;
  }
};

DifferenceIndex sort_differences(std::span<const std::vector<TaggedReal>> groups,
                                 ComparisonLedger& ledger, int arity) {
  std::vector<std::size_t> sizes;
  for (const auto& grp : groups) sizes.push_back(grp.size());
  return DifferenceIndexBuilder::build(
      groups.size(), sizes, [&](std::size_t k, std::size_t x) { return groups[k][x]; }, ledger,
      arity);
}

DifferenceIndex sort_differences(std::span<const std::span<const double>> groups,
                                 ComparisonLedger& ledger, int arity) {
  std::vector<std::size_t> sizes;
  for (const auto& grp : groups) sizes.push_back(grp.size());
  return DifferenceIndexBuilder::build(
      groups.size(), sizes, [&](std::size_t k, std::size_t x) { return row_tagged(groups[k][x], x); },
      ledger, arity);
}

DifferenceIndex::Entry DifferenceIndex::entry(std::size_t k) const {
  const std::uint32_t id = order_.at(k);
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), static_cast<std::size_t>(id));
  const auto group = static_cast<std::size_t>(it - offsets_.begin()) - 1;
  const std::size_t local = id - offsets_[group];
  const std::size_t s = sizes_[group];
  return {static_cast<std::uint32_t>(group), static_cast<std::uint32_t>(local / s),
          static_cast<std::uint32_t>(local % s), values_[id], ranks_[id]};
}

std::vector<DifferenceIndex::Entry> DifferenceIndex::sorted() const {
  std::vector<Entry> out;
  out.reserve(order_.size());
  for (std::size_t k = 0; k < order_.size(); ++k) out.push_back(entry(k));
  return out;
}

CartesianSum::CartesianSum(std::span<const double> rows, Grouping row_groups, std::size_t row_base,
                           std::span<const double> cols, Grouping col_groups, std::size_t col_base,
                           const DifferenceIndex* index)
    : rows_(rows),
      cols_(cols),
      row_groups_(row_groups),
      col_groups_(col_groups),
      row_base_(row_base),
      col_base_(col_base),
      index_(index) {
  if (row_groups_.n != rows_.size() || col_groups_.n != cols_.size()) {
    throw std::invalid_argument("grouping does not match input length");
  }
}

bool CartesianSum::resolvable(Position p, Position q) const {
  return index_ != nullptr && row_groups_.group_of(p.row) == row_groups_.group_of(q.row) &&
         col_groups_.group_of(p.col) == col_groups_.group_of(q.col);
}

std::strong_ordering CartesianSum::resolve(Position p, Position q) const {
  // a_p + b_p < a_q + b_q  iff  a_p - a_q < b_q - b_p, ties go to the tags.
  const std::size_t gi = row_groups_.group_of(p.row);
  const std::size_t gj = col_groups_.group_of(p.col);
  const std::uint32_t rx =
      index_->rank(row_base_ + gi, row_groups_.offset_of(p.row), row_groups_.offset_of(q.row));
  const std::uint32_t ry =
      index_->rank(col_base_ + gj, col_groups_.offset_of(q.col), col_groups_.offset_of(p.col));
  if (rx != ry) return rx <=> ry;
  if (p.row != q.row) return p.row <=> q.row;
  return p.col <=> q.col;
}

std::strong_ordering CartesianSum::compare(Position p, Position q, ComparisonLedger& ledger,
                                           int arity) const {
  if (resolvable(p, q)) return resolve(p, q);
  return compare_sum(row_tagged(rows_[p.row], p.row), col_tagged(cols_[p.col], p.col),
                     row_tagged(rows_[q.row], q.row), col_tagged(cols_[q.col], q.col), ledger,
                     arity);
}

std::vector<Position> sort_fragment(const CartesianSum& sum, const Fragment& fragment,
                                    ComparisonLedger& ledger, int arity) {
  for (const auto& p : fragment) {
    if (p.row >= sum.rows() || p.col >= sum.cols()) {
      throw std::out_of_range("fragment position out of range");
    }
  }
  std::vector<Position> out(fragment);
  std::sort(out.begin(), out.end(),
            [&](Position a, Position b) { return sum.compare(a, b, ledger, arity) < 0; });
  return out;
}

std::vector<std::uint32_t> sort_box(const CartesianSum& sum, std::size_t i, std::size_t j,
                                    ComparisonLedger& ledger, int arity) {
  const Grouping& rg = sum.row_groups();
  const Grouping& cg = sum.col_groups();
  const std::size_t h = rg.size(i);
  const std::size_t w = cg.size(j);
  if (h * w > std::numeric_limits<std::uint32_t>::max()) throw std::length_error("box too large");
  const auto r0 = static_cast<std::uint32_t>(rg.begin(i));
  const auto c0 = static_cast<std::uint32_t>(cg.begin(j));
  auto less = [&](std::uint32_t a, std::uint32_t b) {
    const Position pa{r0 + static_cast<std::uint32_t>(a / w), c0 + static_cast<std::uint32_t>(a % w)};
    const Position pb{r0 + static_cast<std::uint32_t>(b / w), c0 + static_cast<std::uint32_t>(b % w)};
    return sum.compare(pa, pb, ledger, arity) < 0;
  };

  std::vector<std::uint32_t> cells(h * w);
  for (std::size_t k = 0; k < cells.size(); ++k) cells[k] = static_cast<std::uint32_t>(k);
  // Rows are already ascending when the column generators are sorted.
  for (std::size_t x = 0; x < h; ++x) {
    auto first = cells.begin() + static_cast<std::ptrdiff_t>(x * w);
    if (!std::is_sorted(first, first + static_cast<std::ptrdiff_t>(w), less)) {
      std::sort(first, first + static_cast<std::ptrdiff_t>(w), less);
    }
  }
  std::vector<std::uint32_t> buf(cells.size());
  for (std::size_t run = w; run < cells.size(); run *= 2) {
    for (std::size_t lo = 0; lo < cells.size(); lo += 2 * run) {
      const std::size_t mid = std::min(lo + run, cells.size());
      const std::size_t hi = std::min(lo + 2 * run, cells.size());
      std::merge(cells.begin() + static_cast<std::ptrdiff_t>(lo),
                 cells.begin() + static_cast<std::ptrdiff_t>(mid),
                 cells.begin() + static_cast<std::ptrdiff_t>(mid),
                 cells.begin() + static_cast<std::ptrdiff_t>(hi),
                 buf.begin() + static_cast<std::ptrdiff_t>(lo), less);
    }
    cells.swap(buf);
  }
  return cells;
}

}  // namespace fredman
