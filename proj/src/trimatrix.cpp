#include "fredman/trimatrix.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "fredman/dominance.hpp"

namespace fredman {

namespace {

// (count of infinite terms, finite part, tag), ordered lexicographically and
// added pointwise, so Fredman's trick also orders sums involving +inf.
struct ExtKey {
  std::int64_t inf = 0;
  double u = 0;
  std::int64_t tag = 0;

  friend ExtKey operator-(const ExtKey& a, const ExtKey& b) {
    return {a.inf - b.inf, a.u - b.u, a.tag - b.tag};
  }
  friend bool operator<(const ExtKey& a, const ExtKey& b) {
    if (a.inf != b.inf) return a.inf < b.inf;
    if (a.u < b.u) return true;
    if (a.u > b.u) return false;
    return a.tag < b.tag;
  }
};

ExtKey key_a(const ExtMatrix& A, std::size_t i, std::size_t k) {
  const double v = A(i, k);
  const bool inf = std::isinf(v);
  return {inf ? 1 : 0, inf ? 0.0 : v, static_cast<std::int64_t>(k)};
}

ExtKey key_b(const ExtMatrix& B, std::size_t k, std::size_t j) {
  const double v = B(k, j);
  const bool inf = std::isinf(v);
  return {inf ? 1 : 0, inf ? 0.0 : v, 0};
}

struct TickLess {
  ComparisonLedger* ledger;
  int arity;
  template <class T>
  bool operator()(const T& a, const T& b) const {
    ledger->tick(arity);
    return a < b;
  }
};

void check_operands(const ExtMatrix& A, const ExtMatrix& B, const ExtMatrix& T) {
  if (A.cols != B.rows || T.rows != A.rows || T.cols != B.cols) {
    throw std::invalid_argument("dimension mismatch");
  }
  for (double v : A.data)
    if (std::isnan(v) || v == -kInf) throw std::invalid_argument("A entries must be real or +inf");
  for (double v : B.data)
    if (std::isnan(v) || v == -kInf) throw std::invalid_argument("B entries must be real or +inf");
  for (double v : T.data)
    if (std::isnan(v)) throw std::invalid_argument("T entries must not be NaN");
}

// True when A(i,k) + B(k,j) is infinite or reaches T(i,j); monotone along the
// sorted order of a strip.
bool at_or_above(const ExtMatrix& A, const ExtMatrix& B, const ExtMatrix& T, std::size_t i,
                 std::size_t j, std::size_t k, ComparisonLedger& ledger) {
  const double a = A(i, k), b = B(k, j);
  if (std::isinf(a) || std::isinf(b)) return true;
  const double t = T(i, j);
  if (t == -kInf) return true;
  if (t == kInf) return false;
  ledger.tick(3);
  return a + b >= t;
}

struct Best {
  double sum = kInf;
  std::size_t k = kNoWitness;
};

void offer(Best& best, double sum, std::size_t k, ComparisonLedger& ledger) {
  if (best.k == kNoWitness) {
    best = {sum, k};
    return;
  }
  ledger.tick(4);
  if (sum < best.sum || (sum == best.sum && k < best.k)) best = {sum, k};
}

// First position of `order` (global indices ks[order[.]]) at or above the target.
std::size_t first_at_or_above(const ExtMatrix& A, const ExtMatrix& B, const ExtMatrix& T,
                              std::size_t i, std::size_t j, std::span<const std::uint32_t> ks,
                              const std::vector<std::uint32_t>& order, ComparisonLedger& ledger) {
  std::size_t lo = 0, hi = order.size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (at_or_above(A, B, T, i, j, ks[order[mid]], ledger)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

bool finite_sum(const ExtMatrix& A, const ExtMatrix& B, std::size_t i, std::size_t j, std::size_t k) {
  return !std::isinf(A(i, k)) && !std::isinf(B(k, j));
}

// Sorted differences {A(i,k) - A(i,k')} and {B(k',j) - B(k,j)} over k, k' in
// one index set; afterwards the order of A(i,.) + B(.,j) on the set is free.
class SetIndex {
 public:
  SetIndex(const ExtMatrix& A, const ExtMatrix& B, std::span<const std::uint32_t> ks,
           ComparisonLedger& ledger)
      : w_(ks.size()), rows_(A.rows), ra_(A.rows * w_ * w_), rb_(B.cols * w_ * w_) {
    struct Item {
      ExtKey v;
      std::uint32_t slot;
    };
    std::vector<Item> items;
    items.reserve((A.rows + B.cols) * w_ * (w_ > 0 ? w_ - 1 : 0));
    for (std::size_t i = 0; i < A.rows; ++i)
      for (std::size_t x = 0; x < w_; ++x)
        for (std::size_t y = 0; y < w_; ++y)
          if (x != y)
            items.push_back({key_a(A, i, ks[x]) - key_a(A, i, ks[y]),
                             static_cast<std::uint32_t>((i * w_ + x) * w_ + y)});
    const std::size_t offset = A.rows * w_ * w_;
    for (std::size_t j = 0; j < B.cols; ++j)
      for (std::size_t x = 0; x < w_; ++x)
        for (std::size_t y = 0; y < w_; ++y)
          if (x != y)
            items.push_back({key_b(B, ks[y], j) - key_b(B, ks[x], j),
                             static_cast<std::uint32_t>(offset + (j * w_ + x) * w_ + y)});
    TickLess less{&ledger, 4};
    std::sort(items.begin(), items.end(), [&](const Item& p, const Item& q) { return less(p.v, q.v); });
    for (std::uint32_t r = 0; r < items.size(); ++r) {
      const auto s = items[r].slot;
      if (s < offset) {
        ra_[s] = r;
      } else {
        rb_[s - offset] = r;
      }
    }
    size_ = items.size();
  }

  // Local positions ascending by A(i, .) + B(., j), ties by index.
  void order(std::size_t i, std::size_t j, std::vector<std::uint32_t>& out) const {
    out.resize(w_);
    std::iota(out.begin(), out.end(), 0);
    const std::uint32_t* a = ra_.data() + i * w_ * w_;
    const std::uint32_t* b = rb_.data() + j * w_ * w_;
    std::stable_sort(out.begin(), out.end(),
                     [&](std::uint32_t x, std::uint32_t y) { return a[x * w_ + y] < b[x * w_ + y]; });
  }

  std::size_t size() const { return size_; }

 private:
  std::size_t w_;
  std::size_t rows_;
  std::vector<std::uint32_t> ra_;
  std::vector<std::uint32_t> rb_;
  std::size_t size_ = 0;
};

template <class F>
void parallel_rows(std::size_t rows, ComparisonLedger& ledger, F&& body) {
  std::vector<ComparisonLedger> shards(static_cast<std::size_t>(omp_get_max_threads()));
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(rows); ++i) {
    body(static_cast<std::size_t>(i), shards[static_cast<std::size_t>(omp_get_thread_num())]);
  }
  for (const auto& s : shards) ledger.merge(s);
}

TargetProductResult finish(std::size_t r, std::size_t t, const std::vector<Best>& best) {
  TargetProductResult res{ExtMatrix(r, t, kInf), std::vector<std::size_t>(r * t, kNoWitness)};
  for (std::size_t x = 0; x < best.size(); ++x) {
    res.C.data[x] = best[x].sum;
    res.W[x] = best[x].k;
  }
  return res;
}

std::vector<std::uint32_t> strip(std::size_t begin, std::size_t end) {
  std::vector<std::uint32_t> ks(end - begin);
  std::iota(ks.begin(), ks.end(), static_cast<std::uint32_t>(begin));
  return ks;
}

}  // namespace

std::size_t default_tmp_group_size(std::size_t s) {
  return std::clamp<std::size_t>(default_group_size(s), 1, std::max<std::size_t>(1, s));
}

TargetProductResult target_min_plus_trivial(const ExtMatrix& A, const ExtMatrix& B, const ExtMatrix& T) {
  check_operands(A, B, T);
  TargetProductResult res{ExtMatrix(A.rows, B.cols, kInf),
                          std::vector<std::size_t>(A.rows * B.cols, kNoWitness)};
  for (std::size_t i = 0; i < A.rows; ++i) {
    for (std::size_t j = 0; j < B.cols; ++j) {
      for (std::size_t k = 0; k < A.cols; ++k) {
        const double v = A(i, k) + B(k, j);
        if (std::isinf(v) || v < T(i, j)) continue;
        if (v < res.C(i, j)) {
          res.C(i, j) = v;
          res.W[i * B.cols + j] = k;
        }
      }
    }
  }
  return res;
}

TargetProductResult target_min_plus_dt(const ExtMatrix& A, const ExtMatrix& B, const ExtMatrix& T,
                                       std::size_t g, ComparisonLedger& ledger) {
  check_operands(A, B, T);
  const std::size_t r = A.rows, s = A.cols, t = B.cols;
  if (g == 0) g = default_tmp_group_size(s);
  std::vector<Best> best(r * t);
  for (std::size_t begin = 0; begin < s; begin += g) {
    const auto ks = strip(begin, std::min(s, begin + g));
    const SetIndex index(A, B, ks, ledger);
    parallel_rows(r, ledger, [&](std::size_t i, ComparisonLedger& shard) {
      std::vector<std::uint32_t> order;
      for (std::size_t j = 0; j < t; ++j) {
        index.order(i, j, order);
        const std::size_t p = first_at_or_above(A, B, T, i, j, ks, order, shard);
        if (p == order.size()) continue;
        const std::size_t k = ks[order[p]];
        if (finite_sum(A, B, i, j, k)) offer(best[i * t + j], A(i, k) + B(k, j), k, shard);
      }
    });
  }
  return finish(r, t, best);
}

TargetProductResult target_min_plus_dominance(const ExtMatrix& A, const ExtMatrix& B,
                                              const ExtMatrix& T, std::size_t g,
                                              ComparisonLedger& ledger) {
  check_operands(A, B, T);
  const std::size_t r = A.rows, s = A.cols, t = B.cols;
  if (g == 0) g = std::min<std::size_t>(4, std::max<std::size_t>(1, s));
  if (g > kMaxDominanceStrip) throw std::invalid_argument("strip too wide to enumerate permutations");
  std::vector<Best> best(r * t);
  constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();
  for (std::size_t begin = 0; begin < s; begin += g) {
    const auto ks = strip(begin, std::min(s, begin + g));
    const std::size_t w = ks.size();
    std::vector<std::vector<std::uint32_t>> perms;
    std::vector<std::uint32_t> which(r * t, kUnset);
    std::vector<std::uint32_t> pi(w);
    std::iota(pi.begin(), pi.end(), 0);
    do {
      const auto id = static_cast<std::uint32_t>(perms.size());
      perms.push_back(pi);
      std::vector<LabeledPoint<ExtKey>> pts;
      pts.reserve(r + t);
      for (std::size_t j = 0; j < t; ++j) {
        LabeledPoint<ExtKey> p{{}, Color::red, j};
        for (std::size_t x = 0; x + 1 < w; ++x)
          p.coords.push_back(key_b(B, ks[pi[x + 1]], j) - key_b(B, ks[pi[x]], j));
        pts.push_back(std::move(p));
      }
      for (std::size_t i = 0; i < r; ++i) {
        LabeledPoint<ExtKey> p{{}, Color::blue, i};
        for (std::size_t x = 0; x + 1 < w; ++x)
          p.coords.push_back(key_a(A, i, ks[pi[x]]) - key_a(A, i, ks[pi[x + 1]]));
        pts.push_back(std::move(p));
      }
      report_dominating_pairs(
          pts,
          [&](std::size_t j, std::size_t i) {
            auto& slot = which[i * t + j];
            if (slot != kUnset) throw std::logic_error("two strip orders matched one entry");
            slot = id;
          },
          TickLess{&ledger, 4});
    } while (std::next_permutation(pi.begin(), pi.end()));
    for (auto v : which)
      if (v == kUnset) throw std::logic_error("no strip order matched an entry");
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < t; ++j) {
        const auto& order = perms[which[i * t + j]];
        const std::size_t p = first_at_or_above(A, B, T, i, j, ks, order, ledger);
        if (p == order.size()) continue;
        const std::size_t k = ks[order[p]];
        if (finite_sum(A, B, i, j, k)) offer(best[i * t + j], A(i, k) + B(k, j), k, ledger);
      }
    }
  }
  return finish(r, t, best);
}

SampleHierarchy build_sample_hierarchy(std::size_t n, std::size_t g, Rng& rng) {
  if (g == 0) throw std::invalid_argument("g must be positive");
  SampleHierarchy h;
  h.n = n;
  h.g = g;
  if (n == 0) return h;
  std::size_t target = 1;
  if (n > 2) {
    target = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(std::log2(std::log2(static_cast<double>(n))))));
  }
  std::vector<std::vector<std::uint32_t>> base;
  for (std::size_t b = 0; b < n; b += g) base.push_back(strip(b, std::min(n, b + g)));
  h.sets.push_back(std::move(base));
  while (h.sets.size() < target && h.sets.back().size() > 1) {
    const auto& prev = h.sets.back();
    std::vector<std::vector<std::uint32_t>> cur((prev.size() + 1) / 2);
    for (std::size_t p = 0; p < cur.size(); ++p) {
      std::vector<std::uint32_t> pool = prev[2 * p];
      if (2 * p + 1 < prev.size()) pool.insert(pool.end(), prev[2 * p + 1].begin(), prev[2 * p + 1].end());
      const std::size_t take = std::min(g, pool.size());
      for (auto x : sample_without_replacement(pool.size(), take, rng)) cur[p].push_back(pool[x]);
      std::sort(cur[p].begin(), cur[p].end());
    }
    h.sets.push_back(std::move(cur));
  }
  return h;
}

TargetProductResult target_min_plus_sampled(const ExtMatrix& A, const ExtMatrix& B,
                                            const ExtMatrix& T, std::size_t g, Rng& rng,
                                            ComparisonLedger& ledger, SampledStats* stats) {
  check_operands(A, B, T);
  const std::size_t n = A.rows;
  if (A.cols != n || B.cols != n) throw std::invalid_argument("sampled variant needs square matrices");
  if (g == 0) g = default_tmp_group_size(n);
  g = std::clamp<std::size_t>(g, 1, std::max<std::size_t>(1, n));
  const auto H = build_sample_hierarchy(n, g, rng);
  const std::size_t L = H.levels();
  std::vector<Best> best(n * n);
  if (stats) *stats = {L, std::vector<std::uint64_t>(L, 0), std::vector<std::uint64_t>(L, 0)};
  if (n == 0) return finish(0, 0, best);

  std::vector<std::vector<SetIndex>> index(L);
  for (std::size_t l = 0; l < L; ++l)
    for (const auto& ks : H.sets[l]) index[l].emplace_back(A, B, ks, ledger);

  const auto threads = static_cast<std::size_t>(omp_get_max_threads());
  std::vector<std::vector<std::uint64_t>> refine(threads, std::vector<std::uint64_t>(L, 0));
  std::vector<std::vector<std::uint64_t>> dist(threads, std::vector<std::uint64_t>(L, 0));

  parallel_rows(n, ledger, [&](std::size_t i, ComparisonLedger& shard) {
    const auto tid = static_cast<std::size_t>(omp_get_thread_num());
    std::vector<std::vector<std::uint32_t>> cur, next;
    std::vector<std::size_t> cur_wit, next_wit;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t top = L - 1;
      cur.assign(H.sets[top].size(), {});
      cur_wit.assign(H.sets[top].size(), 0);
      for (std::size_t p = 0; p < H.sets[top].size(); ++p) {
        index[top][p].order(i, j, cur[p]);
        cur_wit[p] = first_at_or_above(A, B, T, i, j, H.sets[top][p], cur[p], shard);
      }
      for (std::size_t l = top; l-- > 0;) {
        const auto& sets = H.sets[l];
        next.assign(sets.size(), {});
        next_wit.assign(sets.size(), 0);
        const std::size_t width = H.width(l);
        for (std::size_t q = 0; q < sets.size(); ++q) {
          const std::size_t p = q / 2;
          const auto& parent_set = H.sets[l + 1][p];
          const std::size_t lo_k = q * width, hi_k = lo_k + width;
          // Last parent element below the parent's witness that lies in q.
          std::size_t hint = kNoWitness;
          for (std::size_t x = 0; x < cur_wit[p]; ++x) {
            const std::size_t k = parent_set[cur[p][x]];
            if (k >= lo_k && k < hi_k) hint = k;
          }
          auto& ord = next[q];
          index[l][q].order(i, j, ord);
          std::size_t start = 0;
          if (hint != kNoWitness) {
            while (sets[q][ord[start]] != hint) ++start;
            ++start;
          }
          std::size_t pos = start;
          while (pos < ord.size() && !at_or_above(A, B, T, i, j, sets[q][ord[pos]], shard)) ++pos;
          next_wit[q] = pos;
          ++refine[tid][l];
          dist[tid][l] += pos - start;
        }
        cur.swap(next);
        cur_wit.swap(next_wit);
      }
      for (std::size_t q = 0; q < H.sets[0].size(); ++q) {
        if (cur_wit[q] == cur[q].size()) continue;
        const std::size_t k = H.sets[0][q][cur[q][cur_wit[q]]];
        if (finite_sum(A, B, i, j, k)) offer(best[i * n + j], A(i, k) + B(k, j), k, shard);
      }
    }
  });
  if (stats) {
    for (std::size_t t = 0; t < threads; ++t) {
      for (std::size_t l = 0; l < L; ++l) {
        stats->refinements[l] += refine[t][l];
        stats->hint_distance[l] += dist[t][l];
      }
    }
  }
  return finish(n, n, best);
}

// ---------------------------------------------------------------------------
// Graphs

namespace {

std::uint64_t edge_key(std::size_t n, std::uint32_t u, std::uint32_t v) {
  if (u > v) std::swap(u, v);
  return static_cast<std::uint64_t>(u) * n + v;
}

std::unordered_map<std::uint64_t, double> weight_map(const WeightedGraph& G) {
  std::unordered_map<std::uint64_t, double> w;
  w.reserve(G.edges.size() * 2);
  for (const auto& e : G.edges) w[edge_key(G.n, e.u, e.v)] = e.w;
  return w;
}

std::vector<std::vector<std::uint32_t>> adjacency(const WeightedGraph& G) {
  std::vector<std::vector<std::uint32_t>> adj(G.n);
  for (const auto& e : G.edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

Triangle sorted_triangle(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
  std::uint32_t v[3] = {a, b, c};
  std::sort(v, v + 3);
  return {v[0], v[1], v[2]};
}

}  // namespace

void WeightedGraph::validate() const {
  std::set<std::uint64_t> seen;
  for (const auto& e : edges) {
    if (e.u >= n || e.v >= n) throw std::invalid_argument("edge endpoint out of range");
    if (e.u == e.v) throw std::invalid_argument("self-loop");
    if (std::isnan(e.w) || std::isinf(e.w)) throw std::invalid_argument("edge weight must be finite");
    if (!seen.insert(edge_key(n, e.u, e.v)).second) throw std::invalid_argument("duplicate edge");
  }
}

ExtMatrix WeightedGraph::weight_matrix() const {
  ExtMatrix W(n, n, kInf);
  for (const auto& e : edges) {
    W(e.u, e.v) = e.w;
    W(e.v, e.u) = e.w;
  }
  return W;
}

std::vector<Triangle> all_triangles(const WeightedGraph& G) {
  G.validate();
  const auto adj = adjacency(G);
  std::vector<Triangle> out;
  for (std::uint32_t a = 0; a < G.n; ++a) {
    for (auto b : adj[a]) {
      if (b <= a) continue;
      for (auto c : adj[b]) {
        if (c <= b) continue;
        if (std::binary_search(adj[a].begin(), adj[a].end(), c)) out.push_back({a, b, c});
      }
    }
  }
  return out;
}

std::optional<Triangle> oracle_zero_triangle(const WeightedGraph& G) {
  const auto w = weight_map(G);
  for (const auto& t : all_triangles(G)) {
    if (w.at(edge_key(G.n, t.a, t.b)) + w.at(edge_key(G.n, t.b, t.c)) + w.at(edge_key(G.n, t.a, t.c)) == 0) {
      return t;
    }
  }
  return std::nullopt;
}

std::optional<Triangle> zero_triangle_dense(const WeightedGraph& G, ComparisonLedger& ledger,
                                            const DenseOptions& opt) {
  G.validate();
  const std::size_t n = G.n;
  if (n < 3 || G.edges.size() < 3) return std::nullopt;
  const ExtMatrix W = G.weight_matrix();
  ExtMatrix T(n, n, kInf);
  for (const auto& e : G.edges) {
    T(e.u, e.v) = -e.w;
    T(e.v, e.u) = -e.w;
  }
  TargetProductResult res;
  switch (opt.backend) {
    case TmpBackend::trivial:
      res = target_min_plus_trivial(W, W, T);
      break;
    case TmpBackend::dt:
      res = target_min_plus_dt(W, W, T, opt.g, ledger);
      break;
    case TmpBackend::dominance:
      res = target_min_plus_dominance(W, W, T, opt.g, ledger);
      break;
    case TmpBackend::sampled: {
      Rng rng(opt.seed);
      res = target_min_plus_sampled(W, W, T, opt.g, rng, ledger);
      break;
    }
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      if (T(i, j) == kInf || res.C(i, j) != T(i, j)) continue;
      return sorted_triangle(i, j, static_cast<std::uint32_t>(res.witness(i, j)));
    }
  }
  return std::nullopt;
}

std::size_t Orientation::max_outdegree() const {
  std::size_t m = 0;
  for (const auto& o : out) m = std::max(m, o.size());
  return m;
}

bool Orientation::is_acyclic() const {
  std::vector<std::size_t> indeg(n, 0);
  for (const auto& o : out)
    for (auto v : o) ++indeg[v];
  std::vector<std::uint32_t> stack;
  for (std::uint32_t v = 0; v < n; ++v)
    if (indeg[v] == 0) stack.push_back(v);
  std::size_t seen = 0;
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    ++seen;
    for (auto x : out[v])
      if (--indeg[x] == 0) stack.push_back(x);
  }
  return seen == n;
}

Orientation acyclic_orient(const WeightedGraph& G) {
  G.validate();
  const auto adj = adjacency(G);
  Orientation o;
  o.n = G.n;
  o.out.resize(G.n);
  std::vector<std::size_t> deg(G.n);
  std::vector<char> gone(G.n, 0);
  std::set<std::pair<std::size_t, std::uint32_t>> queue;
  for (std::uint32_t v = 0; v < G.n; ++v) {
    deg[v] = adj[v].size();
    queue.insert({deg[v], v});
  }
  while (!queue.empty()) {
    const auto v = queue.begin()->second;
    queue.erase(queue.begin());
    gone[v] = 1;
    o.order.push_back(v);
    for (auto x : adj[v]) {
      if (gone[x]) continue;
      o.out[v].push_back(x);
      queue.erase({deg[x], x});
      queue.insert({--deg[x], x});
    }
  }
  return o;
}

std::uint64_t monochromatic_out_pairs(const Orientation& o, const std::vector<std::uint32_t>& color) {
  std::uint64_t total = 0;
  std::unordered_map<std::uint32_t, std::uint64_t> count;
  for (const auto& out : o.out) {
    count.clear();
    for (auto x : out) total += count[color[x]]++;
  }
  return total;
}

Coloring color_out_neighbors(const Orientation& o, std::size_t m, std::size_t K, std::uint64_t seed,
                             std::size_t max_draws) {
  if (K == 0) throw std::invalid_argument("K must be positive");
  Coloring c;
  c.K = K;
  c.color.assign(o.n, 0);
  const double bound = static_cast<double>(m) * static_cast<double>(o.max_outdegree()) / static_cast<double>(K);
  for (std::size_t d = 0; d < max_draws; ++d) {
    Rng rng(mix_seed(seed, d));
    for (auto& x : c.color) x = static_cast<std::uint32_t>(uniform_below(rng, K));
    c.monochromatic_pairs = monochromatic_out_pairs(o, c.color);
    c.draws = d + 1;
    if (static_cast<double>(c.monochromatic_pairs) <= bound) return c;
  }
  // Greedy: each vertex takes the colour adding the fewest monochromatic pairs.
  std::vector<std::vector<std::uint32_t>> in(o.n);
  for (std::uint32_t u = 0; u < o.n; ++u)
    for (auto x : o.out[u]) in[x].push_back(u);
  std::vector<std::vector<std::uint64_t>> used(o.n, std::vector<std::uint64_t>(K, 0));
  for (std::uint32_t v = 0; v < o.n; ++v) {
    std::uint32_t pick = 0;
    std::uint64_t least = std::numeric_limits<std::uint64_t>::max();
    for (std::uint32_t k = 0; k < K; ++k) {
      std::uint64_t add = 0;
      for (auto u : in[v]) add += used[u][k];
      if (add < least) {
        least = add;
        pick = k;
      }
    }
    c.color[v] = pick;
    for (auto u : in[v]) ++used[u][pick];
  }
  c.monochromatic_pairs = monochromatic_out_pairs(o, c.color);
  c.draws = 0;
  c.first_fit = true;
  return c;
}

TriangleType classify_triangle(const Orientation& o, const std::vector<std::uint32_t>& color,
                               const Triangle& t) {
  auto arc = [&](std::uint32_t x, std::uint32_t y) {
    return std::binary_search(o.out[x].begin(), o.out[x].end(), y);
  };
  const std::uint32_t v[3] = {t.a, t.b, t.c};
  for (int s = 0; s < 3; ++s) {
    const auto u = v[s], p = v[(s + 1) % 3], q = v[(s + 2) % 3];
    if (!arc(u, p) || !arc(u, q)) continue;
    if (arc(p, q)) return {u, p, color[q]};
    return {u, q, color[p]};
  }
  throw std::logic_error("triangle has no source in the orientation");
}

std::size_t default_sparse_K(std::size_t m) {
  const double mm = static_cast<double>(m);
  const double k = std::ceil(std::pow(mm, 0.25) / std::sqrt(std::log2(mm + 2.0)));
  return std::max<std::size_t>(1, static_cast<std::size_t>(k));
}

std::optional<Triangle> zero_triangle_sparse(const WeightedGraph& G, std::size_t K,
                                             ComparisonLedger& ledger, std::uint64_t seed,
                                             SparseStats* stats) {
  G.validate();
  const std::size_t m = G.edges.size();
  if (K == 0) K = default_sparse_K(m);
  SparseStats st;
  st.K = K;
  const auto o = acyclic_orient(G);
  st.max_outdegree = o.max_outdegree();
  const auto coloring = color_out_neighbors(o, m, K, seed);
  st.monochromatic_pairs = coloring.monochromatic_pairs;
  st.first_fit = coloring.first_fit;
  const auto& color = coloring.color;
  const auto w = weight_map(G);
  auto weight = [&](std::uint32_t a, std::uint32_t b) { return w.at(edge_key(G.n, a, b)); };

  // Per vertex u, ranks of w(u,x) - w(u,y) (tag x - y) and w(u,y) - w(u,x)
  // over same-colour out-neighbour positions x, y.
  std::vector<std::vector<std::uint32_t>> ra(G.n), rb(G.n);
  struct Item {
    TaggedReal v;
    std::uint32_t u;
    std::uint32_t slot;
    bool b;
  };
  std::vector<Item> items;
  for (std::uint32_t u = 0; u < G.n; ++u) {
    const auto& out = o.out[u];
    const std::size_t d = out.size();
    ra[u].assign(d * d, 0);
    rb[u].assign(d * d, 0);
    for (std::size_t x = 0; x < d; ++x) {
      for (std::size_t y = 0; y < d; ++y) {
        if (x == y || color[out[x]] != color[out[y]]) continue;
        const double wx = weight(u, out[x]), wy = weight(u, out[y]);
        const auto slot = static_cast<std::uint32_t>(x * d + y);
        items.push_back({{wx - wy, static_cast<std::int64_t>(out[x]) - static_cast<std::int64_t>(out[y]), 0}, u, slot, false});
        items.push_back({{wy - wx, 0, 0}, u, slot, true});
      }
    }
  }
  st.differences = items.size();
  TickLess less{&ledger, 4};
  std::sort(items.begin(), items.end(), [&](const Item& p, const Item& q) { return less(p.v, q.v); });
  for (std::uint32_t r = 0; r < items.size(); ++r) (items[r].b ? rb : ra)[items[r].u][items[r].slot] = r;

  struct Common {
    std::uint32_t x, pu, pv;
  };
  std::optional<Triangle> found;
  std::vector<Common> common;
  for (std::uint32_t u = 0; u < G.n && !found; ++u) {
    const auto& ou = o.out[u];
    for (std::uint32_t pv = 0; pv < ou.size() && !found; ++pv) {
      const auto v = ou[pv];
      const auto& ov = o.out[v];
      common.clear();
      for (std::uint32_t a = 0, b = 0; a < ou.size() && b < ov.size();) {
        if (ou[a] < ov[b]) {
          ++a;
        } else if (ov[b] < ou[a]) {
          ++b;
        } else {
          common.push_back({ou[a], a, b});
          ++a;
          ++b;
        }
      }
      std::stable_sort(common.begin(), common.end(),
                       [&](const Common& p, const Common& q) { return color[p.x] < color[q.x]; });
      const double target = -weight(u, v);
      const std::size_t du = ou.size(), dv = ov.size();
      for (std::size_t lo = 0; lo < common.size() && !found;) {
        std::size_t hi = lo;
        while (hi < common.size() && color[common[hi].x] == color[common[lo].x]) ++hi;
        ++st.types;
        std::stable_sort(common.begin() + static_cast<std::ptrdiff_t>(lo),
                         common.begin() + static_cast<std::ptrdiff_t>(hi),
                         [&](const Common& p, const Common& q) {
                           return ra[u][p.pu * du + q.pu] < rb[v][p.pv * dv + q.pv];
                         });
        std::size_t a = lo, b = hi;
        while (a < b) {
          const std::size_t mid = a + (b - a) / 2;
          const auto& c = common[mid];
          const double sum = weight(u, c.x) + weight(v, c.x);
          ledger.tick(3);
          if (sum == target) {
            found = sorted_triangle(u, v, c.x);
            break;
          }
          if (sum < target) {
            a = mid + 1;
          } else {
            b = mid;
          }
        }
        lo = hi;
      }
    }
  }
  if (stats) *stats = st;
  return found;
}

std::optional<Triangle> zero_triangle_core(const WeightedGraph& G, std::size_t delta,
                                           ComparisonLedger& ledger, const DenseOptions& opt,
                                           std::size_t* core_size) {
  G.validate();
  const std::size_t m = G.edges.size();
  if (delta == 0) {
    delta = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(m)))));
  }
  const auto adj = adjacency(G);
  const auto w = weight_map(G);
  std::vector<std::size_t> deg(G.n);
  std::vector<char> gone(G.n, 0), queued(G.n, 0);
  std::queue<std::uint32_t> q;
  for (std::uint32_t v = 0; v < G.n; ++v) {
    deg[v] = adj[v].size();
    if (deg[v] < delta) {
      q.push(v);
      queued[v] = 1;
    }
  }
  std::optional<Triangle> found;
  while (!q.empty()) {
    const auto u = q.front();
    q.pop();
    gone[u] = 1;
    std::vector<std::uint32_t> out;
    for (auto x : adj[u]) {
      if (gone[x]) continue;
      out.push_back(x);
      if (--deg[x] < delta && !queued[x]) {
        queued[x] = 1;
        q.push(x);
      }
    }
    for (std::size_t a = 0; a < out.size() && !found; ++a) {
      for (std::size_t b = a + 1; b < out.size(); ++b) {
        auto it = w.find(edge_key(G.n, out[a], out[b]));
        if (it == w.end()) continue;
        ledger.tick(3);
        if (w.at(edge_key(G.n, u, out[a])) + w.at(edge_key(G.n, u, out[b])) + it->second == 0) {
          found = sorted_triangle(u, out[a], out[b]);
          break;
        }
      }
    }
  }
  std::vector<std::uint32_t> id(G.n, 0), back;
  for (std::uint32_t v = 0; v < G.n; ++v) {
    if (gone[v]) continue;
    id[v] = static_cast<std::uint32_t>(back.size());
    back.push_back(v);
  }
  if (core_size) *core_size = back.size();
  if (found) return found;
  WeightedGraph core;
  core.n = back.size();
  for (const auto& e : G.edges)
    if (!gone[e.u] && !gone[e.v]) core.edges.push_back({id[e.u], id[e.v], e.w});
  auto t = zero_triangle_dense(core, ledger, opt);
  if (!t) return std::nullopt;
  return sorted_triangle(back[t->a], back[t->b], back[t->c]);
}

// ---------------------------------------------------------------------------
// Text formats

namespace {

double parse_ext(const std::string& s) {
  if (s == "inf" || s == "+inf") return kInf;
  if (s == "-inf") return -kInf;
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad number: " + s);
  }
  if (used != s.size()) throw std::invalid_argument("bad number: " + s);
  return v;
}

}  // namespace

ExtMatrix read_matrix(std::istream& in) {
  std::size_t r = 0, c = 0;
  if (!(in >> r >> c)) throw std::invalid_argument("matrix header must be \"r c\"");
  ExtMatrix M(r, c);
  for (auto& v : M.data) {
    std::string tok;
    if (!(in >> tok)) throw std::invalid_argument("matrix has too few entries");
    v = parse_ext(tok);
  }
  return M;
}

void write_matrix(std::ostream& out, const ExtMatrix& M) {
  out << M.rows << ' ' << M.cols << '\n';
  for (std::size_t i = 0; i < M.rows; ++i) {
    for (std::size_t j = 0; j < M.cols; ++j) {
      const double v = M(i, j);
      if (j) out << ' ';
      if (v == kInf) {
        out << "inf";
      } else if (v == -kInf) {
        out << "-inf";
      } else {
        out << v;
      }
    }
    out << '\n';
  }
}

WeightedGraph read_graph(std::istream& in) {
  WeightedGraph G;
  std::size_t m = 0;
  if (!(in >> G.n >> m)) throw std::invalid_argument("graph header must be \"n m\"");
  for (std::size_t e = 0; e < m; ++e) {
    std::int64_t u = 0, v = 0;
    std::string w;
    if (!(in >> u >> v >> w)) throw std::invalid_argument("graph has too few edges");
    if (u < 0 || v < 0) throw std::invalid_argument("negative vertex id");
    G.edges.push_back({static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v), parse_ext(w)});
  }
  G.validate();
  return G;
}

void write_graph(std::ostream& out, const WeightedGraph& G) {
  out << G.n << ' ' << G.edges.size() << '\n';
  for (const auto& e : G.edges) out << e.u << ' ' << e.v << ' ' << e.w << '\n';
}

}  // namespace fredman
