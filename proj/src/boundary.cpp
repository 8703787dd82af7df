#include "occam/boundary.hpp"

#include "occam/errors.hpp"

namespace occam {

void check_start_points(AttackObjective& objective, std::span<const double> original,
                        std::span<const double> adversarial) {
  if (!objective.evaluate(adversarial).adversarial)
    throw InvalidStartError("initial adversarial audio does not evaluate adversarial");
  if (objective.evaluate(original).adversarial)
    throw InvalidStartError("original audio evaluates adversarial");
}

std::vector<double> binary_search_to_boundary(AttackObjective& objective,
                                              std::span<const double> original,
                                              std::span<const double> adversarial,
                                              std::size_t steps) {
  if (steps < 1) throw ValidationError("binary search needs at least one step");
  if (original.size() != adversarial.size())
    throw DimensionError("binary search endpoints differ in length");

  std::vector<double> low(original.begin(), original.end());      // benign side
  std::vector<double> high(adversarial.begin(), adversarial.end());  // adversarial side
  std::vector<double> mid(original.size());

  for (std::size_t step = 0; step < steps; ++step) {
    for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (low[i] + high[i]);
    if (objective.evaluate(mid).adversarial)
      high = mid;
    else
      low = mid;
  }
  return high;
}

}  // namespace occam
