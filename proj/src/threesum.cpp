#include "fredman/threesum.hpp"

#include <omp.h>

#include <algorithm>
#include <set>
#include <stdexcept>

namespace fredman {

std::optional<Witness3> oracle_3sum(std::span<const double> A) { return oracle_3sum(A, A, A); }

std::optional<Witness3> oracle_3sum(std::span<const double> A, std::span<const double> B,
                                    std::span<const double> C) {
  for (double a : A)
    for (double b : B)
      for (double c : C)
        if (a + b + c == 0) return Witness3{a, b, c};
  return std::nullopt;
}

std::vector<Witness3> oracle_3sum_all(std::span<const double> A, std::span<const double> B,
                                      std::span<const double> C) {
  std::set<Witness3> found;
  for (double a : A)
    for (double b : B)
      for (double c : C)
        if (a + b + c == 0) found.insert({a, b, c});
  return {found.begin(), found.end()};
}

namespace {

std::vector<double> sorted_copy(std::span<const double> v, ComparisonLedger& ledger, int arity) {
  std::vector<double> out(v.begin(), v.end());
  std::sort(out.begin(), out.end(), [&](double x, double y) {
    ledger.tick(arity);
    return x < y;
  });
  return out;
}

std::vector<std::span<const double>> group_spans(const std::vector<double>& v, const Grouping& g) {
  std::vector<std::span<const double>> out;
  for (std::size_t k = 0; k < g.count(); ++k) out.emplace_back(v.data() + g.begin(k), g.size(k));
  return out;
}

}  // namespace

std::vector<Witness3> solve_quadratic(std::span<const double> A, std::span<const double> B,
                                      std::span<const double> C, ComparisonLedger& ledger,
                                      bool first_only) {
  const auto a = sorted_copy(A, ledger, 2);
  const auto b = sorted_copy(B, ledger, 2);
  std::set<Witness3> found;
  for (double c : C) {
    const double target = -c;
    std::size_t lo = 0;
    std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(b.size()) - 1;
    while (lo < a.size() && hi >= 0) {
      const double s = a[lo] + b[static_cast<std::size_t>(hi)];
      ledger.tick(3);
      if (s == target) {
        found.insert({a[lo], b[static_cast<std::size_t>(hi)], c});
        if (first_only) return {found.begin(), found.end()};
      }
      if (target < s) {
        --hi;
      } else {
        ++lo;
      }
    }
  }
  return {found.begin(), found.end()};
}

std::size_t Step4Setup::first_hi(std::size_t k) const {
  if (form == WalkForm::one_set) return row_groups.group_of(k);
  return col_groups.count() - 1;
}

Step4Setup prepare_one_set(std::span<const double> A, std::size_t g, ComparisonLedger& ledger,
                           const TickArity& arity) {
  Step4Setup s;
  s.form = WalkForm::one_set;
  s.rows = sorted_copy(A, ledger, arity.sort);
  ledger.snapshot("sorted_input");
  s.cols = s.rows;
  s.keys = s.rows;
  s.row_groups = Grouping(s.rows.size(), g);
  s.col_groups = s.row_groups;
  s.col_base = 0;
  if (!s.rows.empty()) s.index = sort_differences(group_spans(s.rows, s.row_groups), ledger, arity.difference);
  ledger.snapshot("sorted_D");
  return s;
}

Step4Setup prepare_three_set(std::span<const double> A, std::span<const double> B,
                             std::span<const double> C, std::size_t g, ComparisonLedger& ledger,
                             const TickArity& arity) {
  Step4Setup s;
  s.form = WalkForm::three_set;
  s.rows = sorted_copy(A, ledger, arity.sort);
  s.cols = sorted_copy(B, ledger, arity.sort);
  ledger.snapshot("sorted_input");
  s.keys.assign(C.begin(), C.end());
  s.row_groups = Grouping(s.rows.size(), g);
  s.col_groups = Grouping(s.cols.size(), g);
  s.col_base = s.row_groups.count();
  auto spans = group_spans(s.rows, s.row_groups);
  auto more = group_spans(s.cols, s.col_groups);
  spans.insert(spans.end(), more.begin(), more.end());
  if (!s.rows.empty() && !s.cols.empty()) s.index = sort_differences(spans, ledger, arity.difference);
  ledger.snapshot("sorted_D");
  return s;
}

namespace {

// Drives the group walk; visit(k, lo, hi) returns true to halt.
template <class Visit>
void group_walk(const Step4Setup& s, ComparisonLedger* ledger, int walk_arity, Visit visit) {
  const std::size_t rows = s.row_groups.count();
  const std::size_t cols = s.col_groups.count();
  if (rows == 0 || cols == 0) return;
  for (std::size_t k = 0; k < s.keys.size(); ++k) {
    const double target = -s.keys[k];
    std::size_t lo = 0;
    auto hi = static_cast<std::ptrdiff_t>(s.first_hi(k));
    const bool one = s.form == WalkForm::one_set;
    while (one ? static_cast<std::ptrdiff_t>(lo) <= hi : (lo < rows && hi >= 0)) {
      const auto h = static_cast<std::size_t>(hi);
      if (visit(k, lo, h)) return;
      if (ledger) ledger->tick(walk_arity);
      const double edge = s.row_groups.group_max(s.rows, lo) + s.col_groups.group_min(s.cols, h);
      if (edge > target) {
        --hi;
      } else {
        ++lo;
      }
    }
  }
}

}  // namespace

WalkResult walk_step4(const Step4Setup& setup, const BoxMembership& member, ComparisonLedger& ledger,
                      const TickArity& arity, const Step4Observer& observer) {
  WalkResult out;
  group_walk(setup, &ledger, arity.walk, [&](std::size_t k, std::size_t lo, std::size_t hi) {
    if (observer) observer(k, lo, hi);
    ++out.queries;
    if (auto cell = member(lo, hi, -setup.keys[k], ledger)) {
      out.witness = setup.witness(k, *cell);
      return true;
    }
    return false;
  });
  return out;
}

std::vector<BoxQuery> record_step4_queries(const Step4Setup& setup) {
  std::vector<BoxQuery> out;
  group_walk(setup, nullptr, 0, [&](std::size_t k, std::size_t lo, std::size_t hi) {
    out.push_back({static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(lo),
                   static_cast<std::uint32_t>(hi)});
    return false;
  });
  return out;
}

std::optional<std::uint32_t> search_sorted_cells(const CartesianSum& sum, std::size_t i,
                                                 std::size_t j, std::span<const std::uint32_t> cells,
                                                 double target, ComparisonLedger& ledger, int arity) {
  const std::size_t w = sum.col_groups().size(j);
  const std::size_t r0 = sum.row_groups().begin(i);
  const std::size_t c0 = sum.col_groups().begin(j);
  std::ptrdiff_t lo = 0;
  auto hi = static_cast<std::ptrdiff_t>(cells.size()) - 1;
  while (lo <= hi) {
    const std::ptrdiff_t mid = lo + (hi - lo) / 2;
    const std::uint32_t cell = cells[static_cast<std::size_t>(mid)];
    const double v = sum.value({static_cast<std::uint32_t>(r0 + cell / w),
                                static_cast<std::uint32_t>(c0 + cell % w)});
    ledger.tick(arity);
    if (v == target) return cell;
    if (v < target) {
      lo = mid + 1;
    } else {
      hi = mid - 1;
    }
  }
  return std::nullopt;
}

namespace {

Position cell_position(const CartesianSum& sum, std::size_t i, std::size_t j, std::uint32_t cell) {
  const std::size_t w = sum.col_groups().size(j);
  return {static_cast<std::uint32_t>(sum.row_groups().begin(i) + cell / w),
          static_cast<std::uint32_t>(sum.col_groups().begin(j) + cell % w)};
}

std::optional<Witness3> run_reference(const Step4Setup& s, ComparisonLedger& ledger,
                                      const DecisionTreeOptions& opt, DecisionTreeStats& st) {
  const CartesianSum sum = s.sum();
  const std::size_t rows = s.row_groups.count();
  const std::size_t cols = s.col_groups.count();
  if (s.rows.size() * s.cols.size() > 50'000'000) {
    throw std::length_error("reference kernel keeps every box; input too large");
  }
  // Step 3: every box the walk can reach, sorted up front.
  std::vector<std::vector<std::uint32_t>> boxes(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (s.form == WalkForm::one_set && j < i) continue;
      boxes[i * cols + j] = sort_box(sum, i, j, ledger, opt.arity.difference);
      ++st.boxes_sorted;
    }
  }
  ledger.snapshot("boxes_sorted");
  auto member = [&](std::size_t lo, std::size_t hi, double target,
                    ComparisonLedger& l) -> std::optional<Position> {
    const auto& cells = boxes[lo * cols + hi];
    if (auto c = search_sorted_cells(sum, lo, hi, cells, target, l, opt.arity.probe)) {
      return cell_position(sum, lo, hi, *c);
    }
    return std::nullopt;
  };
  auto res = walk_step4(s, member, ledger, opt.arity, opt.observer);
  st.queries = res.queries;
  return res.witness;
}

struct Answer {
  std::uint32_t ticks = 0;
  std::int64_t cell = -1;
};

std::optional<Witness3> run_batched(const Step4Setup& s, ComparisonLedger& ledger,
                                    const DecisionTreeOptions& opt, DecisionTreeStats& st) {
  const CartesianSum sum = s.sum();
  const std::size_t cols = s.col_groups.count();
  const auto queries = record_step4_queries(s);

  // Bucket queries by box so each box is sorted exactly once.
  std::vector<std::uint32_t> box_of(queries.size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    box_of[q] = static_cast<std::uint32_t>(queries[q].lo * cols + queries[q].hi);
  }
  std::vector<std::uint32_t> order(queries.size());
  for (std::size_t q = 0; q < order.size(); ++q) order[q] = static_cast<std::uint32_t>(q);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t x, std::uint32_t y) { return box_of[x] < box_of[y]; });
  std::vector<std::size_t> starts;
  for (std::size_t t = 0; t < order.size(); ++t) {
    if (t == 0 || box_of[order[t]] != box_of[order[t - 1]]) starts.push_back(t);
  }
  starts.push_back(order.size());
  const std::size_t nboxes = starts.size() - 1;

  const bool par = opt.kernel == Kernel::parallel;
  const int workers = par ? omp_get_max_threads() : 1;
  std::vector<ComparisonLedger> sort_shards(static_cast<std::size_t>(workers));
  std::vector<Answer> answers(queries.size());

#pragma omp parallel for schedule(dynamic) if (par)
  for (std::size_t b = 0; b < nboxes; ++b) {
    const auto tid = static_cast<std::size_t>(par ? omp_get_thread_num() : 0);
    const std::uint32_t box = box_of[order[starts[b]]];
    const std::size_t i = box / cols, j = box % cols;
    const auto cells = sort_box(sum, i, j, sort_shards[tid], opt.arity.difference);
    ComparisonLedger local;
    for (std::size_t t = starts[b]; t < starts[b + 1]; ++t) {
      const std::uint32_t q = order[t];
      const std::uint64_t before = local.total();
      auto hit = search_sorted_cells(sum, i, j, cells, -s.keys[queries[q].key], local, opt.arity.probe);
      answers[q].ticks = static_cast<std::uint32_t>(local.total() - before);
      if (hit) answers[q].cell = *hit;
    }
  }

  for (const auto& shard : sort_shards) ledger.merge(shard);
  st.boxes_sorted = nboxes;
  ledger.snapshot("boxes_sorted");

  // Replay in walk order: identical ledger to the literal walk.
  for (std::size_t q = 0; q < queries.size(); ++q) {
    ++st.queries;
    ledger.tick(opt.arity.probe, answers[q].ticks);
    if (answers[q].cell >= 0) {
      const auto& bq = queries[q];
      return s.witness(bq.key, cell_position(sum, bq.lo, bq.hi,
                                             static_cast<std::uint32_t>(answers[q].cell)));
    }
    ledger.tick(opt.arity.walk);
  }
  return std::nullopt;
}

}  // namespace

std::optional<Witness3> solve_decision_tree(Step4Setup& setup, ComparisonLedger& ledger,
                                            const DecisionTreeOptions& opt,
                                            DecisionTreeStats* stats) {
  DecisionTreeStats st;
  st.g = setup.row_groups.g;
  st.groups = setup.row_groups.count();
  std::optional<Witness3> w;
  if (opt.kernel == Kernel::reference) {
    w = run_reference(setup, ledger, opt, st);
  } else {
    w = run_batched(setup, ledger, opt, st);
  }
  st.step3_ticks = ledger.delta("sorted_D", "boxes_sorted");
  ledger.snapshot("done");
  if (stats) *stats = st;
  return w;
}

std::optional<Witness3> solve_decision_tree(std::span<const double> A, ComparisonLedger& ledger,
                                            const DecisionTreeOptions& opt,
                                            DecisionTreeStats* stats) {
  const std::size_t g = opt.g ? opt.g : default_group_size(A.size());
  auto setup = prepare_one_set(A, g, ledger, opt.arity);
  return solve_decision_tree(setup, ledger, opt, stats);
}

std::optional<Witness3> solve_decision_tree(std::span<const double> A, std::span<const double> B,
                                            std::span<const double> C, ComparisonLedger& ledger,
                                            const DecisionTreeOptions& opt,
                                            DecisionTreeStats* stats) {
  const std::size_t g = opt.g ? opt.g : default_group_size(std::max(A.size(), B.size()));
  auto setup = prepare_three_set(A, B, C, g, ledger, opt.arity);
  return solve_decision_tree(setup, ledger, opt, stats);
}

}  // namespace fredman
