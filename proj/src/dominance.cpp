#include "fredman/dominance.hpp"

#include <cmath>

namespace fredman {

double c_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::domain_error("epsilon must lie in (0,1)");
  const double p = std::exp2(epsilon);
  return p / (p - 1.0);
}

DominanceCostModel dominance_cost_model(double epsilon) { return {epsilon, c_epsilon(epsilon)}; }

}  // namespace fredman
