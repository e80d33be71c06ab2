#include "fredman/conv3sum.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace fredman {

std::optional<ConvWitness> oracle_conv3sum(std::span<const double> A) {
  const std::size_t n = A.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; i + j < n; ++j)
      if (A[i] + A[j] == A[i + j]) return ConvWitness{i, j};
  return std::nullopt;
}

std::vector<AntidiagonalSegment> antidiagonal_segments(std::size_t n, std::size_t g, std::size_t k) {
  if (g == 0) throw std::invalid_argument("g must be positive");
  std::vector<AntidiagonalSegment> out;
  if (k >= n) return out;
  for (std::size_t i = 0; i <= k; ++i) {
    const std::size_t j = k - i;
    const std::size_t p = i / g, q = j / g;
    if (out.empty() || out.back().p != p || out.back().q != q) out.push_back({p, q, {}});
    out.back().cells.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
  }
  return out;
}

std::optional<ConvWitness> solve_conv_blocked(std::span<const double> A, std::size_t g,
                                              ComparisonLedger& ledger, ConvStats* stats) {
  if (g == 0) throw std::invalid_argument("g must be positive");
  const std::size_t n = A.size();
  ConvStats st;
  st.g = g;
  if (n == 0) {
    if (stats) *stats = st;
    return std::nullopt;
  }
  const Grouping groups(n, g);
  std::vector<std::span<const double>> spans;
  for (std::size_t b = 0; b < groups.count(); ++b) spans.push_back(A.subspan(groups.begin(b), groups.size(b)));
  const DifferenceIndex index = sort_differences(spans, ledger, 4);
  const CartesianSum sum(A, groups, 0, A, groups, 0, &index);
  ledger.snapshot("conv_sorted_D");

  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::uint32_t>> boxes;
  std::vector<std::uint32_t> rank_in_box;
  std::optional<ConvWitness> best;
  for (std::size_t k = 0; k < n; ++k) {
    const double key = A[k];
    for (const auto& seg : antidiagonal_segments(n, g, k)) {
      ++st.segments;
      auto it = boxes.find({seg.p, seg.q});
      if (it == boxes.end()) {
        const auto before = ledger.total();
        it = boxes.emplace(std::pair{seg.p, seg.q}, sort_box(sum, seg.p, seg.q, ledger)).first;
        st.box_sort_ticks += ledger.total() - before;
        ++st.boxes_sorted;
      }
      // The segment's cells in box order.
      const std::size_t w = groups.size(seg.q);
      const auto& order = it->second;
      rank_in_box.assign(groups.size(seg.p) * w, 0);
      for (std::uint32_t r = 0; r < order.size(); ++r) rank_in_box[order[r]] = r;
      std::vector<Position> cells = seg.cells;
      auto local = [&](const Position& c) {
        return (c.row - groups.begin(seg.p)) * w + (c.col - groups.begin(seg.q));
      };
      std::sort(cells.begin(), cells.end(),
                [&](const Position& a, const Position& b) { return rank_in_box[local(a)] < rank_in_box[local(b)]; });
      // Binary search, then collect every equal neighbour.
      std::size_t lo = 0, hi = cells.size();
      std::optional<std::size_t> hit;
      while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        const double v = sum.value(cells[mid]);
        ledger.tick(3);
        if (v == key) {
          hit = mid;
          break;
        }
        if (v < key) {
          lo = mid + 1;
        } else {
          hi = mid;
        }
      }
      if (!hit) continue;
      auto consider = [&](const Position& c) {
        ConvWitness w{c.row, c.col};
        if (!best || w < *best) best = w;
      };
      consider(cells[*hit]);
      for (std::size_t x = *hit; x-- > 0;) {
        ledger.tick(3);
        if (sum.value(cells[x]) != key) break;
        consider(cells[x]);
      }
      for (std::size_t x = *hit + 1; x < cells.size(); ++x) {
        ledger.tick(3);
        if (sum.value(cells[x]) != key) break;
        consider(cells[x]);
      }
    }
  }
  if (stats) *stats = st;
  return best;
}

}  // namespace fredman
