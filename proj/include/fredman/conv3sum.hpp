#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fredman/core.hpp"

namespace fredman {

// (i, j) with i + j < n and A(i) + A(j) == A(i + j).
using ConvWitness = std::pair<std::size_t, std::size_t>;

// Lexicographically least witness by exhaustive scan.
std::optional<ConvWitness> oracle_conv3sum(std::span<const double> A);

// Cells (i, k - i) of the implicit A + A matrix that fall in box (p, q) of
// g x g blocks, one entry per box the antidiagonal meets.
struct AntidiagonalSegment {
  std::size_t p = 0;
  std::size_t q = 0;
  std::vector<Position> cells;  // ascending row
};

std::vector<AntidiagonalSegment> antidiagonal_segments(std::size_t n, std::size_t g, std::size_t k);

struct ConvStats {
  std::size_t g = 0;
  std::size_t boxes_sorted = 0;
  std::size_t segments = 0;
  std::uint64_t box_sort_ticks = 0;  // ledger delta while sorting boxes
};

// Blocks of g consecutive indices; differences inside each block are sorted,
// every box order is deduced from them, and A(k) is binary-searched on the
// antidiagonal part of each box. Returns the lexicographically least witness.
std::optional<ConvWitness> solve_conv_blocked(std::span<const double> A, std::size_t g,
                                              ComparisonLedger& ledger, ConvStats* stats = nullptr);

}  // namespace fredman
