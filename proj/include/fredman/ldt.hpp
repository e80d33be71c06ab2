#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fredman/core.hpp"
#include "fredman/threesum.hpp"

namespace fredman {

// phi(x_1..x_k) = alpha[0] + sum alpha[i] x_i, k odd.
struct LinearForm {
  std::size_t k = 3;
  std::vector<double> alpha;  // size k + 1

  void validate() const;
};

struct ReducedInstance {
  std::vector<double> A;  // alpha_0 + first (k-1)/2 terms
  std::vector<double> B;  // next (k-1)/2 terms
  std::vector<double> C;  // alpha_k x
};

inline constexpr std::size_t kLdtMemoryCap = 10'000'000;

ReducedInstance reduce_kldt(const LinearForm& phi, std::span<const double> S,
                            std::size_t cap = kLdtMemoryCap);

// Comparison arities: sorting A or B touches k-1 inputs, two D elements 2k-2,
// a box cell against a key k.
TickArity kldt_arity(std::size_t k);

struct KldtStats {
  std::size_t g = 0;
  std::size_t a_size = 0;
  std::size_t c_size = 0;
};

bool solve_kldt(const LinearForm& phi, std::span<const double> S, std::size_t g,
                ComparisonLedger& ledger, KldtStats* stats = nullptr,
                Kernel kernel = Kernel::parallel);

// Exhaustive scan of S^k. Throws std::length_error when |S|^k exceeds cap.
bool oracle_kldt(const LinearForm& phi, std::span<const double> S,
                 std::size_t cap = 500'000'000);

}  // namespace fredman
