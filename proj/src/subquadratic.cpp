#include "fredman/subquadratic.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "fredman/dominance.hpp"

namespace fredman {

namespace {

constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();

struct TickLess {
  ComparisonLedger* ledger;
  int arity;
  bool operator()(const TaggedReal& x, const TaggedReal& y) const {
    ledger->tick(arity);
    return x < y;
  }
};

// Differences inside one group, tagged so that (row diff) vs (column diff)
// decides the order of two cells of a box exactly.
struct GroupDiffs {
  const Step4Setup& s;

  TaggedReal col(std::size_t j, std::size_t c1, std::size_t c2) const {
    const std::size_t base = s.col_groups.begin(j);
    return {s.cols[base + c1] - s.cols[base + c2], 0,
            static_cast<std::int64_t>(c1) - static_cast<std::int64_t>(c2)};
  }
  TaggedReal row(std::size_t i, std::size_t r1, std::size_t r2) const {
    const std::size_t base = s.row_groups.begin(i);
    return {s.rows[base + r1] - s.rows[base + r2],
            static_cast<std::int64_t>(r1) - static_cast<std::int64_t>(r2), 0};
  }
};

std::vector<std::size_t> full_groups(const Grouping& g, std::size_t side) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < g.count(); ++k) {
    if (g.size(k) == side) out.push_back(k);
  }
  return out;
}

// Appends the coordinates certifying that `c` is the contour of its key cell
// (l, m): sigma = +1 where the walk moves left (key < cell), -1 where it
// moves down (cell < key). The key cell itself is skipped.
void contour_coords(const Contour& c, std::size_t l, std::size_t m, const GroupDiffs& d,
                    std::size_t group, Color color, std::vector<TaggedReal>& out) {
  for (std::size_t t = 0; t + 1 < c.steps.size(); ++t) {
    const auto r = static_cast<std::size_t>(c.steps[t].lo);
    const auto col = static_cast<std::size_t>(c.steps[t].hi);
    if (r == l && col == m) continue;
    const bool down = c.steps[t + 1].lo == c.steps[t].lo + 1;
    TaggedReal v = color == Color::red ? d.col(group, col, m) : d.row(group, l, r);
    out.push_back(down ? -v : v);
  }
}

// Coordinates certifying that cells in `order` ascend.
void order_coords(std::span<const std::uint32_t> order, std::size_t g, const GroupDiffs& d,
                  std::size_t group, Color color, std::vector<TaggedReal>& out) {
  for (std::size_t t = 0; t + 1 < order.size(); ++t) {
    const std::size_t r0 = order[t] / g, c0 = order[t] % g;
    const std::size_t r1 = order[t + 1] / g, c1 = order[t + 1] % g;
    out.push_back(color == Color::red ? d.col(group, c1, c0) : d.row(group, r0, r1));
  }
}

void assemble_order(BoxPlan& box, const LegalPairCatalog& cat,
                    const std::vector<std::uint32_t>& p_cells) {
  box.order.clear();
  box.p_index.clear();
  box.p_index.push_back(0);
  box.order.push_back(p_cells[0]);
  for (std::size_t t = 0; t < box.entries.size(); ++t) {
    const auto& o = cat.pairs[box.entries[t]].orders[box.orders[t]];
    box.order.insert(box.order.end(), o.begin(), o.end());
    box.p_index.push_back(static_cast<std::uint32_t>(box.order.size()));
    box.order.push_back(p_cells[t + 1]);
  }
  box.kind = BoxPlan::Kind::sorted;
}

void mark_ragged(MatchResult& res, const Step4Setup& setup, std::size_t g) {
  for (std::size_t i = 0; i < res.row_groups; ++i) {
    for (std::size_t j = 0; j < res.col_groups; ++j) {
      auto& b = res.boxes[i * res.col_groups + j];
      if (setup.row_groups.size(i) != g || setup.col_groups.size(j) != g) {
        b.ragged = true;
        b.kind = BoxPlan::Kind::walk;
        ++res.ragged;
      }
    }
  }
}

void match_cascade(const Step4Setup& setup, const LegalPairCatalog& cat, ComparisonLedger& ledger,
                   MatchResult& res) {
  const std::size_t g = cat.g;
  const std::size_t C = res.col_groups;
  const GroupDiffs d{setup};
  const TickLess less{&ledger, 4};
  const auto rows = full_groups(setup.row_groups, g);
  const auto cols = full_groups(setup.col_groups, g);
  const std::size_t p = cat.P.p();
  for (auto i : rows)
    for (auto j : cols) res.boxes[i * C + j].contour.assign(p, kUnset);

  // Contour of every P cell in every box.
  for (std::size_t ai = 0; ai < p; ++ai) {
    const std::uint32_t a = cat.P.positions[ai];
    const std::size_t l = a / g, m = a % g;
    for (auto tau : cat.through.at(a)) {
      std::vector<LabeledPoint<TaggedReal>> pts;
      for (auto j : cols) {
        LabeledPoint<TaggedReal> pt{{}, Color::red, j};
        contour_coords(cat.contours[tau], l, m, d, j, Color::red, pt.coords);
        pts.push_back(std::move(pt));
      }
      for (auto i : rows) {
        LabeledPoint<TaggedReal> pt{{}, Color::blue, i};
        contour_coords(cat.contours[tau], l, m, d, i, Color::blue, pt.coords);
        pts.push_back(std::move(pt));
      }
      ++res.dominance_calls;
      res.pairs_reported += report_dominating_pairs(
          pts,
          [&](std::size_t j, std::size_t i) {
            auto& slot = res.boxes[i * C + j].contour[ai];
            if (slot != kUnset) throw std::logic_error("two contours matched one key");
            slot = tau;
          },
          less);
    }
  }

  // Order of P from nested LE sets, then a catalog lookup per consecutive pair.
  std::map<std::uint32_t, std::vector<std::pair<std::size_t, std::size_t>>> uses;
  std::vector<std::vector<std::uint32_t>> p_cells(res.boxes.size());
  for (auto i : rows) {
    for (auto j : cols) {
      const std::size_t bi = i * C + j;
      auto& box = res.boxes[bi];
      std::vector<std::size_t> idx(p);
      std::iota(idx.begin(), idx.end(), 0);
      for (auto k : idx) {
        if (box.contour[k] == kUnset) throw std::logic_error("no contour matched a key");
      }
      std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
        return std::popcount(cat.le[box.contour[x]]) < std::popcount(cat.le[box.contour[y]]);
      });
      for (std::size_t t = 0; t + 1 < p; ++t) {
        const CellMask lo = cat.le[box.contour[idx[t]]], hi = cat.le[box.contour[idx[t + 1]]];
        if ((lo & ~hi) || lo == hi) throw std::logic_error("contours of one box are not nested");
      }
      for (auto k : idx) p_cells[bi].push_back(cat.P.positions[k]);
      for (std::size_t t = 0; t + 1 < p; ++t) {
        auto e = cat.find(cat.P.positions[idx[t]], box.contour[idx[t]],
                          cat.P.positions[idx[t + 1]], box.contour[idx[t + 1]]);
        if (!e) {
          box.bad = true;
          break;
        }
        box.entries.push_back(*e);
      }
      if (box.bad) {
        box.entries.clear();
        continue;
      }
      box.orders.assign(box.entries.size(), kUnset);
      for (std::size_t t = 0; t < box.entries.size(); ++t) uses[box.entries[t]].push_back({bi, t});
    }
  }

  // Order of S for every used pair.
  for (const auto& [e, list] : uses) {
    const auto& lp = cat.pairs[e];
    if (lp.orders.size() == 1) {
      for (auto [bi, t] : list) res.boxes[bi].orders[t] = 0;
      continue;
    }
    std::unordered_map<std::size_t, std::size_t> slot_of;
    std::vector<std::size_t> ri, cj;
    for (auto [bi, t] : list) {
      slot_of[bi] = t;
      ri.push_back(bi / C);
      cj.push_back(bi % C);
    }
    std::sort(ri.begin(), ri.end());
    ri.erase(std::unique(ri.begin(), ri.end()), ri.end());
    std::sort(cj.begin(), cj.end());
    cj.erase(std::unique(cj.begin(), cj.end()), cj.end());
    for (std::uint32_t k = 0; k < lp.orders.size(); ++k) {
      std::vector<LabeledPoint<TaggedReal>> pts;
      for (auto j : cj) {
        LabeledPoint<TaggedReal> pt{{}, Color::red, j};
        order_coords(lp.orders[k], g, d, j, Color::red, pt.coords);
        pts.push_back(std::move(pt));
      }
      for (auto i : ri) {
        LabeledPoint<TaggedReal> pt{{}, Color::blue, i};
        order_coords(lp.orders[k], g, d, i, Color::blue, pt.coords);
        pts.push_back(std::move(pt));
      }
      ++res.dominance_calls;
      res.pairs_reported += report_dominating_pairs(
          pts,
          [&](std::size_t j, std::size_t i) {
            auto it = slot_of.find(i * C + j);
            if (it == slot_of.end()) return;
            auto& o = res.boxes[it->first].orders[it->second];
            if (o != kUnset) throw std::logic_error("two orders matched one gap");
            o = k;
          },
          less);
    }
  }

  for (auto i : rows) {
    for (auto j : cols) {
      const std::size_t bi = i * C + j;
      auto& box = res.boxes[bi];
      if (box.bad) continue;
      for (auto o : box.orders) {
        if (o == kUnset) throw std::logic_error("no order matched a gap");
      }
      assemble_order(box, cat, p_cells[bi]);
    }
  }
}

void match_literal(const Step4Setup& setup, const LegalPairCatalog& cat, ComparisonLedger& ledger,
                   MatchResult& res) {
  const std::size_t g = cat.g;
  const std::size_t C = res.col_groups;
  const GroupDiffs d{setup};
  const TickLess less{&ledger, 4};
  const auto rows = full_groups(setup.row_groups, g);
  const auto cols = full_groups(setup.col_groups, g);
  const std::size_t tau_dims = g >= 1 ? 2 * g - 2 : 0;
  const std::size_t pi_dims = cat.s >= 1 ? cat.s - 1 : 0;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> hits(res.boxes.size());

  auto build = [&](const LegalPair& lp, std::uint32_t k, std::size_t group, Color color) {
    LabeledPoint<TaggedReal> pt{{}, color, group};
    auto pad = [&](std::size_t upto) { pt.coords.resize(upto, TaggedReal{}); };
    contour_coords(cat.contours[lp.tau], lp.a / g, lp.a % g, d, group, color, pt.coords);
    pad(tau_dims);
    contour_coords(cat.contours[lp.tau2], lp.b / g, lp.b % g, d, group, color, pt.coords);
    pad(2 * tau_dims);
    order_coords(lp.orders[k], g, d, group, color, pt.coords);
    pad(2 * tau_dims + pi_dims);
    return pt;
  };

  for (std::uint32_t e = 0; e < cat.pairs.size(); ++e) {
    const auto& lp = cat.pairs[e];
    for (std::uint32_t k = 0; k < lp.orders.size(); ++k) {
      std::vector<LabeledPoint<TaggedReal>> pts;
      for (auto j : cols) pts.push_back(build(lp, k, j, Color::red));
      for (auto i : rows) pts.push_back(build(lp, k, i, Color::blue));
      ++res.dominance_calls;
      res.pairs_reported += report_dominating_pairs(
          pts, [&](std::size_t j, std::size_t i) { hits[i * C + j].push_back({e, k}); }, less);
    }
  }

  std::map<std::uint32_t, std::size_t> p_slot;
  for (std::size_t k = 0; k < cat.P.p(); ++k) p_slot[cat.P.positions[k]] = k;
  const std::uint32_t last = static_cast<std::uint32_t>(g * g - 1);
  for (auto i : rows) {
    for (auto j : cols) {
      const std::size_t bi = i * C + j;
      auto& box = res.boxes[bi];
      box.contour.assign(cat.P.p(), kUnset);
      std::vector<std::uint32_t> p_cells{0};
      std::uint32_t cur = 0;
      while (cur != last) {
        const std::pair<std::uint32_t, std::uint32_t>* next = nullptr;
        for (const auto& h : hits[bi]) {
          if (cat.pairs[h.first].a != cur) continue;
          if (next) throw std::logic_error("two pairs matched one key");
          next = &h;
        }
        if (!next) break;
        const auto& lp = cat.pairs[next->first];
        box.entries.push_back(next->first);
        box.orders.push_back(next->second);
        box.contour[p_slot[lp.a]] = lp.tau;
        box.contour[p_slot[lp.b]] = lp.tau2;
        cur = lp.b;
        p_cells.push_back(cur);
      }
      if (cur != last || p_cells.size() != cat.P.p()) {
        box.bad = true;
        box.entries.clear();
        box.orders.clear();
        continue;
      }
      assemble_order(box, cat, p_cells);
    }
  }
}

}  // namespace

MatchResult match_boxes(const Step4Setup& setup, const LegalPairCatalog& catalog,
                        ComparisonLedger& ledger, MatchMode mode) {
  if (setup.row_groups.g != catalog.g || setup.col_groups.g != catalog.g) {
    throw std::invalid_argument("catalog built for a different group size");
  }
  MatchResult res;
  res.row_groups = setup.row_groups.count();
  res.col_groups = setup.col_groups.count();
  res.boxes.resize(res.row_groups * res.col_groups);
  mark_ragged(res, setup, catalog.g);
  if (mode == MatchMode::cascade) {
    match_cascade(setup, catalog, ledger, res);
  } else {
    match_literal(setup, catalog, ledger, res);
  }
  for (const auto& b : res.boxes) {
    if (b.ragged) continue;
    if (b.bad) {
      ++res.bad;
    } else {
      ++res.matched;
    }
  }
  return res;
}

std::optional<Position> search_box_walk(const CartesianSum& sum, std::size_t i, std::size_t j,
                                        double target, ComparisonLedger& ledger, int arity) {
  const auto r0 = static_cast<std::uint32_t>(sum.row_groups().begin(i));
  const auto c0 = static_cast<std::uint32_t>(sum.col_groups().begin(j));
  const auto h = static_cast<std::int64_t>(sum.row_groups().size(i));
  std::int64_t x = 0;
  auto y = static_cast<std::int64_t>(sum.col_groups().size(j)) - 1;
  while (x < h && y >= 0) {
    const Position pos{r0 + static_cast<std::uint32_t>(x), c0 + static_cast<std::uint32_t>(y)};
    const double v = sum.value(pos);
    ledger.tick(arity);
    if (v == target) return pos;
    if (target < v) {
      --y;
    } else {
      ++x;
    }
  }
  return std::nullopt;
}

std::optional<Position> search_box_plan(const CartesianSum& sum, std::size_t i, std::size_t j,
                                        const BoxPlan& plan, double target,
                                        ComparisonLedger& ledger, int arity) {
  if (plan.kind == BoxPlan::Kind::walk) return search_box_walk(sum, i, j, target, ledger, arity);
  const std::size_t w = sum.col_groups().size(j);
  auto at = [&](std::uint32_t cell) {
    return Position{static_cast<std::uint32_t>(sum.row_groups().begin(i) + cell / w),
                    static_cast<std::uint32_t>(sum.col_groups().begin(j) + cell % w)};
  };
  if (plan.p_index.empty()) {
    if (auto c = search_sorted_cells(sum, i, j, plan.order, target, ledger, arity)) return at(*c);
    return std::nullopt;
  }
  // Predecessor among the P cells, then the gap after it.
  std::ptrdiff_t lo = 0;
  auto hi = static_cast<std::ptrdiff_t>(plan.p_index.size()) - 1;
  while (lo <= hi) {
    const std::ptrdiff_t mid = lo + (hi - lo) / 2;
    const std::uint32_t cell = plan.order[plan.p_index[static_cast<std::size_t>(mid)]];
    const double v = sum.value(at(cell));
    ledger.tick(arity);
    if (v == target) return at(cell);
    if (v < target) {
      lo = mid + 1;
    } else {
      hi = mid - 1;
    }
  }
  if (hi < 0 || lo >= static_cast<std::ptrdiff_t>(plan.p_index.size())) return std::nullopt;
  const std::size_t first = plan.p_index[static_cast<std::size_t>(hi)] + 1;
  const std::size_t last = plan.p_index[static_cast<std::size_t>(lo)];
  std::span<const std::uint32_t> gap(plan.order.data() + first, last - first);
  if (auto c = search_sorted_cells(sum, i, j, gap, target, ledger, arity)) return at(*c);
  return std::nullopt;
}

MatchResult match_boxes_simple(const Step4Setup& setup, ComparisonLedger& ledger, PermutationSet set,
                               SimpleStats* stats) {
  const std::size_t g = setup.row_groups.g;
  if (set == PermutationSet::all && g > 3) {
    throw std::invalid_argument("g too large to enumerate every permutation of a box");
  }
  MatchResult res;
  res.row_groups = setup.row_groups.count();
  res.col_groups = setup.col_groups.count();
  res.boxes.resize(res.row_groups * res.col_groups);
  mark_ragged(res, setup, g);
  const std::size_t C = res.col_groups;
  const GroupDiffs d{setup};
  const TickLess less{&ledger, 4};
  const auto rows = full_groups(setup.row_groups, g);
  const auto cols = full_groups(setup.col_groups, g);
  std::vector<std::size_t> hits(res.boxes.size(), 0);

  std::vector<std::uint32_t> all(g * g);
  std::iota(all.begin(), all.end(), 0);
  std::vector<std::vector<std::uint32_t>> grid;
  if (set == PermutationSet::grid) grid = grid_linear_extensions(g, all, 10'000'000);

  std::size_t perms = 0;
  auto visit = [&](const std::vector<std::uint32_t>& pi) {
    ++perms;
    std::vector<LabeledPoint<TaggedReal>> pts;
    for (auto j : cols) {
      LabeledPoint<TaggedReal> pt{{}, Color::red, j};
      order_coords(pi, g, d, j, Color::red, pt.coords);
      pts.push_back(std::move(pt));
    }
    for (auto i : rows) {
      LabeledPoint<TaggedReal> pt{{}, Color::blue, i};
      order_coords(pi, g, d, i, Color::blue, pt.coords);
      pts.push_back(std::move(pt));
    }
    ++res.dominance_calls;
    res.pairs_reported += report_dominating_pairs(
        pts,
        [&](std::size_t j, std::size_t i) {
          auto& box = res.boxes[i * C + j];
          if (hits[i * C + j]++ == 0) {
            box.order = pi;
            box.kind = BoxPlan::Kind::sorted;
          }
        },
        less);
  };
  if (set == PermutationSet::grid) {
    for (const auto& pi : grid) visit(pi);
  } else {
    std::vector<std::uint32_t> pi = all;
    do {
      visit(pi);
    } while (std::next_permutation(pi.begin(), pi.end()));
  }

  std::size_t lo = std::numeric_limits<std::size_t>::max(), hi = 0;
  for (auto i : rows) {
    for (auto j : cols) {
      const std::size_t h = hits[i * C + j];
      lo = std::min(lo, h);
      hi = std::max(hi, h);
      if (h != 1) throw std::logic_error("a box was not matched by exactly one permutation");
    }
  }
  res.matched = rows.size() * cols.size();
  if (stats) {
    stats->permutations = perms;
    stats->boxes = res.boxes.size();
    stats->matched = res.matched;
    stats->ragged = res.ragged;
    stats->max_matches_per_box = hi;
    stats->min_matches_per_box = res.matched ? lo : 0;
  }
  return res;
}

namespace {

std::optional<Witness3> walk_with_plans(const Step4Setup& setup, const MatchResult& match,
                                        ComparisonLedger& ledger) {
  const CartesianSum sum = setup.sum();
  const TickArity arity{};
  auto member = [&](std::size_t lo, std::size_t hi, double target, ComparisonLedger& l) {
    return search_box_plan(sum, lo, hi, match.box(lo, hi), target, l, arity.probe);
  };
  return walk_step4(setup, member, ledger, arity).witness;
}

}  // namespace

std::optional<Witness3> solve_subquadratic_simple(std::span<const double> A, std::size_t g,
                                                  double epsilon, ComparisonLedger& ledger,
                                                  PermutationSet set, SimpleStats* stats) {
  if (g == 0) throw std::invalid_argument("g must be positive");
  (void)c_epsilon(epsilon);
  auto setup = prepare_one_set(A, g, ledger);
  if (setup.rows.empty()) return std::nullopt;
  auto match = match_boxes_simple(setup, ledger, set, stats);
  ledger.snapshot("matched");
  return walk_with_plans(setup, match, ledger);
}

std::size_t default_subquadratic_g(PointSetMode mode) {
  (void)mode;
  return 5;
}

PointSetP select_best_point_set(const Step4Setup& setup, std::span<const PointSetP> candidates,
                                std::size_t s, std::size_t M, Rng& rng, ComparisonLedger& ledger,
                                std::vector<double>* estimates) {
  if (candidates.empty() || M == 0) throw std::invalid_argument("need candidates and M >= 1");
  const auto queries = record_step4_queries(setup);
  std::vector<std::size_t> bad(candidates.size(), 0);
  if (!queries.empty()) {
    const CartesianSum sum = setup.sum();
    const std::size_t g = candidates.front().g;
    for (std::size_t m = 0; m < M; ++m) {
      const auto& q = queries[uniform_below(rng, queries.size())];
      if (setup.row_groups.size(q.lo) != g || setup.col_groups.size(q.hi) != g) continue;
      const auto cells = sort_box(sum, q.lo, q.hi, ledger);
      for (std::size_t l = 0; l < candidates.size(); ++l) {
        if (is_bad(cells, candidates[l], s)) ++bad[l];
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t l = 1; l < candidates.size(); ++l) {
    if (bad[l] < bad[best]) best = l;
  }
  if (estimates) {
    estimates->clear();
    for (auto b : bad) estimates->push_back(static_cast<double>(b) / static_cast<double>(M));
  }
  return candidates[best];
}

PointSetP select_best_point_set(std::span<const double> A, std::size_t g, std::size_t p,
                                std::size_t s, std::size_t L, std::size_t M, Rng& rng) {
  if (L == 0) throw std::invalid_argument("L must be at least 1");
  ComparisonLedger ledger;
  auto setup = prepare_one_set(A, g, ledger);
  std::vector<PointSetP> candidates;
  for (std::size_t l = 0; l < L; ++l) candidates.push_back(random_point_set(g, p, rng));
  return select_best_point_set(setup, candidates, s, M, rng, ledger);
}

std::shared_ptr<const LegalPairCatalog> cached_catalog(std::size_t g, const PointSetP& P,
                                                       std::size_t s, std::size_t max_entries) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const LegalPairCatalog>> cache;
  std::string key = std::to_string(g) + ":" + std::to_string(s) + ":" + std::to_string(max_entries) + ":";
  for (auto c : P.positions) key += std::to_string(c) + ",";
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto cat = std::make_shared<const LegalPairCatalog>(enumerate_legal_pairs(g, P, s, max_entries));
  std::lock_guard<std::mutex> lock(mu);
  if (cache.size() >= 256) cache.clear();
  cache.emplace(key, cat);
  return cat;
}

std::optional<Witness3> solve_subquadratic(std::span<const double> A,
                                           const SubquadraticParams& params,
                                           ComparisonLedger& ledger, SubquadraticStats* stats) {
  constexpr auto kAuto = SubquadraticParams::kAuto;
  const std::size_t g = params.g == kAuto ? default_subquadratic_g(params.mode) : params.g;
  if (g == 0 || g > kMaxMaskSide) throw std::invalid_argument("subquadratic solver needs 1 <= g <= 8");
  SubquadraticStats st;
  st.g = g;
  st.c_epsilon = c_epsilon(params.epsilon);
  Rng rng(params.seed);

  auto setup = prepare_one_set(A, g, ledger);
  if (setup.rows.empty()) {
    if (stats) *stats = st;
    return std::nullopt;
  }

  PointSetP P;
  std::size_t s = 0;
  if (params.mode == PointSetMode::deterministic) {
    st.q = params.q == kAuto ? default_grid_q(g) : params.q;
    P = deterministic_point_set(g, st.q);
    s = params.s == kAuto ? std::max<std::size_t>(1, grid_gap_bound(g, st.q)) : params.s;
  } else {
    s = params.s == kAuto ? g : params.s;
    const std::size_t p = params.p == kAuto ? default_random_p(g, s) : params.p;
    if (params.L > 1) {
      std::vector<PointSetP> candidates;
      for (std::size_t l = 0; l < params.L; ++l) candidates.push_back(random_point_set(g, p, rng));
      P = select_best_point_set(setup, candidates, s, params.M, rng, ledger);
    } else {
      P = random_point_set(g, p, rng);
    }
  }
  st.s = s;
  st.p = P.p();

  std::shared_ptr<const LegalPairCatalog> cat;
  try {
    cat = cached_catalog(g, P, s, params.max_catalog_entries);
  } catch (const std::length_error& e) {
    throw std::invalid_argument(std::string("parameters infeasible: ") + e.what());
  }
  st.catalog_pairs = cat->pairs.size();
  st.catalog_entries = cat->entry_count();

  const auto match = match_boxes(setup, *cat, ledger, params.match);
  ledger.snapshot("matched");
  st.boxes = match.boxes.size();
  st.matched = match.matched;
  st.bad = match.bad;
  st.ragged = match.ragged;
  st.dominance_calls = match.dominance_calls;
  if (stats) *stats = st;
  return walk_with_plans(setup, match, ledger);
}

}  // namespace fredman
