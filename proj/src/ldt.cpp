#include "fredman/ldt.hpp"

#include <algorithm>
#include <stdexcept>

namespace fredman {

void LinearForm::validate() const {
  if (k < 3 || k % 2 == 0) throw std::invalid_argument("k must be odd and at least 3");
  if (alpha.size() != k + 1) throw std::invalid_argument("need k + 1 coefficients");
  for (std::size_t i = 1; i <= k; ++i) {
    if (alpha[i] == 0) throw std::invalid_argument("non-constant coefficients must be nonzero");
  }
}

namespace {

// All sums sum_{i in [first, last]} alpha_i x_i over S^(last - first + 1), plus base.
std::vector<double> half_sums(const LinearForm& phi, std::span<const double> S, std::size_t first,
                              std::size_t last, double base, std::size_t cap) {
  std::vector<double> out{base};
  for (std::size_t i = first; i <= last; ++i) {
    if (out.size() > cap / std::max<std::size_t>(1, S.size())) {
      throw std::length_error("reduced instance exceeds the memory cap");
    }
    std::vector<double> next;
    next.reserve(out.size() * S.size());
    for (double v : out)
      for (double x : S) next.push_back(v + phi.alpha[i] * x);
    out = std::move(next);
  }
  return out;
}

}  // namespace

ReducedInstance reduce_kldt(const LinearForm& phi, std::span<const double> S, std::size_t cap) {
  phi.validate();
  const std::size_t h = (phi.k - 1) / 2;
  ReducedInstance r;
  if (S.empty()) return r;
  r.A = half_sums(phi, S, 1, h, phi.alpha[0], cap);
  r.B = half_sums(phi, S, h + 1, phi.k - 1, 0.0, cap);
  for (double x : S) r.C.push_back(phi.alpha[phi.k] * x);
  return r;
}

TickArity kldt_arity(std::size_t k) {
  const int kk = static_cast<int>(k);
  return {kk - 1, 2 * kk - 2, kk, kk};
}

bool solve_kldt(const LinearForm& phi, std::span<const double> S, std::size_t g,
                ComparisonLedger& ledger, KldtStats* stats, Kernel kernel) {
  auto r = reduce_kldt(phi, S);
  if (r.A.empty()) return false;
  if (g == 0) g = default_group_size(S.size());
  g = std::min(g, r.A.size());
  DecisionTreeOptions opt;
  opt.g = g;
  opt.kernel = kernel;
  opt.arity = kldt_arity(phi.k);
  if (stats) *stats = {g, r.A.size(), r.C.size()};
  return solve_decision_tree(r.A, r.B, r.C, ledger, opt).has_value();
}

bool oracle_kldt(const LinearForm& phi, std::span<const double> S, std::size_t cap) {
  phi.validate();
  if (S.empty()) return false;
  double total = 1;
  for (std::size_t i = 0; i < phi.k; ++i) total *= static_cast<double>(S.size());
  if (total > static_cast<double>(cap)) throw std::length_error("S^k exceeds the oracle cap");
  const std::size_t h = (phi.k - 1) / 2;
  std::vector<std::size_t> idx(phi.k, 0);
  while (true) {
    // Same grouping as the reduction so rounding agrees.
    double a = phi.alpha[0], b = 0;
    for (std::size_t i = 0; i < h; ++i) a += phi.alpha[i + 1] * S[idx[i]];
    for (std::size_t i = h; i + 1 < phi.k; ++i) b += phi.alpha[i + 1] * S[idx[i]];
    if (a + b + phi.alpha[phi.k] * S[idx[phi.k - 1]] == 0) return true;
    std::size_t p = 0;
    while (p < phi.k && ++idx[p] == S.size()) idx[p++] = 0;
    if (p == phi.k) return false;
  }
}

}  // namespace fredman
