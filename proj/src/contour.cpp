#include "fredman/contour.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace fredman {

std::string Contour::moves() const {
  std::string out;
  for (std::size_t t = 1; t < steps.size(); ++t) out.push_back(steps[t].lo != steps[t - 1].lo ? 'D' : 'L');
  return out;
}

bool Contour::passes(int lo, int hi) const {
  for (std::size_t t = 0; t + 1 < steps.size(); ++t) {
    if (steps[t].lo == lo && steps[t].hi == hi) return true;
  }
  return false;
}

bool Contour::moves_down_at(int lo, int hi) const {
  for (std::size_t t = 0; t + 1 < steps.size(); ++t) {
    if (steps[t].lo == lo && steps[t].hi == hi) return steps[t + 1].lo == lo + 1;
  }
  return false;
}

Contour compute_contour(const std::function<TaggedReal(std::size_t, std::size_t)>& box,
                        std::size_t g, const TaggedReal& key) {
  return walk_contour(g, g, [&](int lo, int hi) {
    return key < box(static_cast<std::size_t>(lo), static_cast<std::size_t>(hi));
  });
}

Contour contour_from_moves(std::size_t g, std::string_view moves) {
  std::size_t t = 0;
  Contour c = walk_contour(g, g, [&](int, int) {
    if (t >= moves.size()) throw std::invalid_argument("move string too short");
    return moves[t++] == 'L';
  });
  if (t != moves.size()) throw std::invalid_argument("move string too long");
  return c;
}

std::vector<Contour> all_contours(std::size_t g) {
  std::vector<Contour> out;
  std::string path;
  const int n = static_cast<int>(g);
  std::function<void(int, int)> rec = [&](int lo, int hi) {
    if (lo == n || hi < 0) {
      out.push_back(contour_from_moves(g, path));
      return;
    }
    path.push_back('L');
    rec(lo, hi - 1);
    path.back() = 'D';
    rec(lo + 1, hi);
    path.pop_back();
  };
  rec(0, n - 1);
  return out;
}

CellMask full_mask(std::size_t g) {
  if (g > kMaxMaskSide) throw std::invalid_argument("cell masks need g <= 8");
  const std::size_t n = g * g;
  return n == 64 ? ~CellMask{0} : (CellMask{1} << n) - 1;
}

CellMask le_mask(const Contour& c) {
  const std::size_t g = c.cols;
  if (g > kMaxMaskSide || c.rows != g) throw std::invalid_argument("cell masks need square g <= 8");
  CellMask m = 0;
  for (std::size_t t = 0; t + 1 < c.steps.size(); ++t) {
    const auto& s = c.steps[t];
    if (c.steps[t + 1].lo == s.lo + 1) {
      for (int hi = 0; hi <= s.hi; ++hi) m |= cell_bit(g, static_cast<std::size_t>(s.lo), static_cast<std::size_t>(hi));
    }
  }
  return m;
}

CellMask path_mask(const Contour& c) {
  CellMask m = 0;
  for (std::size_t t = 0; t + 1 < c.steps.size(); ++t) {
    m |= cell_bit(c.cols, static_cast<std::size_t>(c.steps[t].lo), static_cast<std::size_t>(c.steps[t].hi));
  }
  return m;
}

Tripartition tripartition(const Contour& lower, const Contour& upper, std::size_t upper_lo,
                          std::size_t upper_hi) {
  const std::size_t g = lower.cols;
  const CellMask full = full_mask(g);
  Tripartition t;
  t.R = le_mask(lower);
  t.T = (full & ~le_mask(upper)) | cell_bit(g, upper_lo, upper_hi);
  t.S = full & ~t.R & ~t.T;
  return t;
}

CellMask PointSetP::mask() const {
  CellMask m = 0;
  for (auto c : positions) m |= CellMask{1} << c;
  return m;
}

PointSetP make_point_set(std::size_t g, std::vector<std::uint32_t> cells) {
  PointSetP P;
  P.g = g;
  P.member.assign(g * g, 0);
  for (auto c : cells) {
    if (c >= g * g) throw std::out_of_range("point outside the box");
    P.member[c] = 1;
  }
  P.member[0] = 1;
  P.member[g * g - 1] = 1;
  for (std::uint32_t c = 0; c < g * g; ++c) {
    if (P.member[c]) P.positions.push_back(c);
  }
  return P;
}

PointSetP random_point_set(std::size_t g, std::size_t p, Rng& rng) {
  if (g == 0) throw std::invalid_argument("g must be positive");
  const std::size_t corners = g == 1 ? 1 : 2;
  if (p < corners || p > g * g) throw std::invalid_argument("p out of range for random point set");
  std::vector<std::uint32_t> interior;
  for (std::uint32_t c = 1; c + 1 < g * g; ++c) interior.push_back(c);
  std::vector<std::uint32_t> cells;
  for (auto k : sample_without_replacement(interior.size(), p - corners, rng)) cells.push_back(interior[k]);
  return make_point_set(g, std::move(cells));
}

std::size_t grid_spacing(std::size_t g, std::size_t q) { return (g + 1 + q) / (q + 1); }

PointSetP deterministic_point_set(std::size_t g, std::size_t q) {
  if (g == 0) throw std::invalid_argument("g must be positive");
  const std::size_t d = grid_spacing(g, q);
  if (q * d > g) throw std::invalid_argument("grid does not fit in the box");
  std::vector<std::uint32_t> cells;
  for (std::size_t k = 1; k <= q; ++k)
    for (std::size_t l = 1; l <= q; ++l)
      cells.push_back(static_cast<std::uint32_t>((k * d - 1) * g + (l * d - 1)));
  return make_point_set(g, std::move(cells));
}

std::size_t grid_gap_bound(std::size_t g, std::size_t q) { return 2 * g * (grid_spacing(g, q) - 1); }

std::size_t default_grid_q(std::size_t g) {
  auto q = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(g))));
  while (q > 0 && q * grid_spacing(g, q) > g) --q;
  return q;
}

std::size_t default_random_p(std::size_t g, std::size_t s) {
  const double gg = static_cast<double>(g * g);
  for (std::size_t p = 2; p < g * g; ++p) {
    if (gg * std::pow(1.0 - static_cast<double>(p) / gg, static_cast<double>(s + 1)) <= 1.0 / static_cast<double>(g)) {
      return p;
    }
  }
  return g * g;
}

bool is_bad(std::span<const std::uint32_t> sorted_cells, const PointSetP& P, std::size_t s) {
  std::size_t run = 0;
  for (auto c : sorted_cells) {
    if (P.contains(c)) {
      run = 0;
    } else if (++run >= s + 1) {
      return true;
    }
  }
  return false;
}

bool is_bad(const CartesianSum& sum, std::size_t i, std::size_t j, const PointSetP& P,
            std::size_t s, ComparisonLedger& ledger) {
  if (sum.row_groups().size(i) != P.g || sum.col_groups().size(j) != P.g) {
    throw std::invalid_argument("is_bad needs a full g x g box");
  }
  return is_bad(sort_box(sum, i, j, ledger), P, s);
}

std::size_t LegalPairCatalog::entry_count() const {
  std::size_t n = 0;
  for (const auto& p : pairs) n += p.orders.size();
  return n;
}

std::string LegalPairCatalog::key(std::uint32_t a, std::uint32_t tau, std::uint32_t b,
                                  std::uint32_t tau2) const {
  std::string k;
  k.push_back(static_cast<char>(a));
  k.push_back(static_cast<char>(b));
  k += contours[tau].moves();
  k.push_back('|');
  k += contours[tau2].moves();
  return k;
}

std::optional<std::uint32_t> LegalPairCatalog::find(std::uint32_t a, std::uint32_t tau,
                                                    std::uint32_t b, std::uint32_t tau2) const {
  auto it = lookup.find(key(a, tau, b, tau2));
  if (it == lookup.end()) return std::nullopt;
  return it->second;
}

namespace {

// Contours through each P cell that leave it downward and can belong to that
// cell's own key (the cell below it is not in LE).
std::map<std::uint32_t, std::vector<std::uint32_t>> through_contours(
    std::size_t g, const PointSetP& P, const std::vector<Contour>& contours,
    const std::vector<CellMask>& le) {
  std::map<std::uint32_t, std::vector<std::uint32_t>> through;
  for (auto cell : P.positions) {
    const int lo = static_cast<int>(cell / g), hi = static_cast<int>(cell % g);
    auto& list = through[cell];
    for (std::uint32_t t = 0; t < contours.size(); ++t) {
      if (!contours[t].moves_down_at(lo, hi)) continue;
      if (static_cast<std::size_t>(lo) + 1 < g &&
          (le[t] & cell_bit(g, static_cast<std::size_t>(lo) + 1, static_cast<std::size_t>(hi)))) {
        continue;
      }
      list.push_back(t);
    }
  }
  return through;
}

}  // namespace

void for_each_contour_pair(
    std::size_t g, const PointSetP& P,
    const std::function<void(std::uint32_t, std::uint32_t, std::uint32_t, std::uint32_t,
                             const Tripartition&)>& visit,
    std::vector<Contour>* contours_out) {
  auto contours = all_contours(g);
  std::vector<CellMask> le(contours.size());
  for (std::size_t t = 0; t < contours.size(); ++t) le[t] = le_mask(contours[t]);
  auto through = through_contours(g, P, contours, le);
  for (auto a : P.positions) {
    for (auto b : P.positions) {
      if (a == b) continue;
      const CellMask bb = CellMask{1} << b;
      for (auto t1 : through[a]) {
        if (le[t1] & bb) continue;
        for (auto t2 : through[b]) {
          if (le[t1] & ~le[t2]) continue;
          visit(a, t1, b, t2, tripartition(contours[t1], contours[t2], b / g, b % g));
        }
      }
    }
  }
  if (contours_out) *contours_out = std::move(contours);
}

std::vector<std::vector<std::uint32_t>> grid_linear_extensions(std::size_t g,
                                                               std::span<const std::uint32_t> cells,
                                                               std::size_t cap) {
  std::vector<std::vector<std::uint32_t>> out;
  const std::size_t n = cells.size();
  std::vector<char> used(n, 0);
  std::vector<std::uint32_t> cur;
  auto below = [&](std::uint32_t x, std::uint32_t y) {  // x < y in the product order
    return x != y && x / g <= y / g && x % g <= y % g;
  };
  std::function<void()> rec = [&] {
    if (cur.size() == n) {
      if (out.size() >= cap) throw std::length_error("too many orders for the catalog");
      out.push_back(cur);
      return;
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (used[k]) continue;
      bool minimal = true;
      for (std::size_t l = 0; l < n && minimal; ++l) {
        if (!used[l] && below(cells[l], cells[k])) minimal = false;
      }
      if (!minimal) continue;
      used[k] = 1;
      cur.push_back(cells[k]);
      rec();
      cur.pop_back();
      used[k] = 0;
    }
  };
  rec();
  return out;
}

LegalPairCatalog enumerate_legal_pairs(std::size_t g, const PointSetP& P, std::size_t s,
                                       std::size_t max_entries) {
  if (s < 1) throw std::invalid_argument("s must be at least 1");
  if (P.g != g) throw std::invalid_argument("point set built for a different g");
  LegalPairCatalog cat;
  cat.g = g;
  cat.s = s;
  cat.P = P;
  const CellMask pmask = P.mask();
  std::size_t entries = 0;
  for_each_contour_pair(
      g, P,
      [&](std::uint32_t a, std::uint32_t t1, std::uint32_t b, std::uint32_t t2,
          const Tripartition& parts) {
        if ((parts.S & pmask) || static_cast<std::size_t>(std::popcount(parts.S)) > s) return;
        LegalPair lp;
        lp.a = a;
        lp.b = b;
        lp.tau = t1;
        lp.tau2 = t2;
        lp.parts = parts;
        for (std::uint32_t c = 0; c < g * g; ++c) {
          if (parts.S & (CellMask{1} << c)) lp.s_cells.push_back(c);
        }
        lp.orders = grid_linear_extensions(g, lp.s_cells, max_entries - entries);
        entries += lp.orders.size();
        cat.pairs.push_back(std::move(lp));
      },
      &cat.contours);
  cat.le.resize(cat.contours.size());
  for (std::size_t t = 0; t < cat.contours.size(); ++t) cat.le[t] = le_mask(cat.contours[t]);
  cat.through = through_contours(g, P, cat.contours, cat.le);
  for (std::uint32_t k = 0; k < cat.pairs.size(); ++k) {
    const auto& lp = cat.pairs[k];
    cat.lookup.emplace(cat.key(lp.a, lp.tau, lp.b, lp.tau2), k);
  }
  return cat;
}

}  // namespace fredman
