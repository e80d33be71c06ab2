#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fredman/core.hpp"
#include "fredman/rng.hpp"

namespace fredman {

struct ContourStep {
  int lo = 0;
  int hi = 0;
  friend bool operator==(const ContourStep&, const ContourStep&) = default;
};

enum class ContourExit { southern, western };

// Search path of the two-pointer walk in an h x w box: starts at (0, w-1),
// moves left while the key is below the cell and down otherwise. The last
// step is the off-grid position (h, .) or (., -1).
struct Contour {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<ContourStep> steps;
  ContourExit exit = ContourExit::western;

  // One character per move: 'L' (hi - 1) or 'D' (lo + 1).
  std::string moves() const;
  bool passes(int lo, int hi) const;
  // True when the walk visits (lo, hi) and leaves it downward.
  bool moves_down_at(int lo, int hi) const;
};

// key_below(lo, hi) answers "key < cell(lo, hi)".
template <class KeyBelow>
Contour walk_contour(std::size_t rows, std::size_t cols, KeyBelow key_below) {
  Contour c;
  c.rows = rows;
  c.cols = cols;
  int lo = 0;
  int hi = static_cast<int>(cols) - 1;
  while (lo < static_cast<int>(rows) && hi >= 0) {
    c.steps.push_back({lo, hi});
    if (key_below(lo, hi)) {
      --hi;
    } else {
      ++lo;
    }
  }
  c.steps.push_back({lo, hi});
  c.exit = hi < 0 ? ContourExit::western : ContourExit::southern;
  return c;
}

Contour compute_contour(const std::function<TaggedReal(std::size_t, std::size_t)>& box,
                        std::size_t g, const TaggedReal& key);
Contour contour_from_moves(std::size_t g, std::string_view moves);
// Every monotone path from (0, g-1) to an exit: C(2g, g) of them.
std::vector<Contour> all_contours(std::size_t g);

// Cell sets over [g]^2 for g <= 8, bit lo * g + hi.
using CellMask = std::uint64_t;
inline constexpr std::size_t kMaxMaskSide = 8;

inline CellMask cell_bit(std::size_t g, std::size_t lo, std::size_t hi) {
  return CellMask{1} << (lo * g + hi);
}
CellMask full_mask(std::size_t g);
// Cells whose value is <= the contour's key: in each row the prefix up to the
// column where the walk moves down.
CellMask le_mask(const Contour& c);
CellMask path_mask(const Contour& c);

struct Tripartition {
  CellMask R = 0;
  CellMask S = 0;
  CellMask T = 0;
};

// R: cells <= the lower key; T: cells >= the upper key; S: strictly between.
Tripartition tripartition(const Contour& lower, const Contour& upper, std::size_t upper_lo,
                          std::size_t upper_hi);

struct PointSetP {
  std::size_t g = 0;
  std::vector<std::uint32_t> positions;  // lo * g + hi, ascending
  std::vector<char> member;              // size g^2

  std::size_t p() const { return positions.size(); }
  bool contains(std::size_t lo, std::size_t hi) const { return member[lo * g + hi] != 0; }
  bool contains(std::uint32_t cell) const { return member[cell] != 0; }
  CellMask mask() const;
};

PointSetP make_point_set(std::size_t g, std::vector<std::uint32_t> cells);
// Corners plus p - 2 distinct uniform non-corner cells.
PointSetP random_point_set(std::size_t g, std::size_t p, Rng& rng);
// Corners plus the q x q grid {(k D - 1, l D - 1)}, D = ceil((g+1)/(q+1)).
PointSetP deterministic_point_set(std::size_t g, std::size_t q);
std::size_t grid_spacing(std::size_t g, std::size_t q);
// s for which the grid leaves no bad box: 2 g (D - 1).
std::size_t grid_gap_bound(std::size_t g, std::size_t q);
std::size_t default_grid_q(std::size_t g);
// Smallest p with g^2 (1 - p/g^2)^(s+1) <= 1/g, capped at g^2.
std::size_t default_random_p(std::size_t g, std::size_t s);

// True iff s + 1 consecutive cells of the sorted box avoid P.
bool is_bad(std::span<const std::uint32_t> sorted_cells, const PointSetP& P, std::size_t s);
bool is_bad(const CartesianSum& sum, std::size_t i, std::size_t j, const PointSetP& P,
            std::size_t s, ComparisonLedger& ledger);

struct LegalPair {
  std::uint32_t a = 0;     // lower key cell
  std::uint32_t b = 0;     // upper key cell
  std::uint32_t tau = 0;   // contour of a, index into the catalog's contour table
  std::uint32_t tau2 = 0;  // contour of b
  Tripartition parts;
  std::vector<std::uint32_t> s_cells;             // S, ascending cell index
  std::vector<std::vector<std::uint32_t>> orders;  // candidate orders pi of S, ascending by value
};

struct LegalPairCatalog {
  std::size_t g = 0;
  std::size_t s = 0;
  PointSetP P;
  std::vector<Contour> contours;
  std::vector<CellMask> le;
  // Contours through a P cell that leave it downward, keyed by that cell.
  std::map<std::uint32_t, std::vector<std::uint32_t>> through;
  std::vector<LegalPair> pairs;
  std::map<std::string, std::uint32_t> lookup;

  std::size_t entry_count() const;
  std::optional<std::uint32_t> find(std::uint32_t a, std::uint32_t tau, std::uint32_t b,
                                    std::uint32_t tau2) const;
  std::string key(std::uint32_t a, std::uint32_t tau, std::uint32_t b, std::uint32_t tau2) const;
};

// Visits every (a, tau, b, tau2) with tau through a, tau2 through b, both
// leaving their key downward, LE(tau) inside LE(tau2) and b outside LE(tau),
// regardless of S. Only contours that can be the contour of their own key are
// used: the cell below the key must lie outside LE.
void for_each_contour_pair(
    std::size_t g, const PointSetP& P,
    const std::function<void(std::uint32_t a, std::uint32_t tau, std::uint32_t b,
                             std::uint32_t tau2, const Tripartition&)>& visit,
    std::vector<Contour>* contours_out = nullptr);

// Pairs with S disjoint from P and |S| <= s, each with every linear extension
// of the grid order on S. Throws std::length_error past max_entries orders.
LegalPairCatalog enumerate_legal_pairs(std::size_t g, const PointSetP& P, std::size_t s,
                                       std::size_t max_entries = 1'000'000);

// Linear extensions of the product order restricted to cells (row-major).
std::vector<std::vector<std::uint32_t>> grid_linear_extensions(std::size_t g,
                                                               std::span<const std::uint32_t> cells,
                                                               std::size_t cap);

}  // namespace fredman
