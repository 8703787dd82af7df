#pragma once

#include <span>
#include <vector>

#include "occam/objective.hpp"

namespace occam {

/// Verifies that `adversarial` evaluates finite and `original` does not.
/// Consumes exactly two queries; throws InvalidStartError otherwise.
void check_start_points(AttackObjective& objective, std::span<const double> original,
                        std::span<const double> adversarial);

/// Bisects the segment [original, adversarial] on the success predicate,
/// keeping the adversarial endpoint. Returns an adversarial point within
/// ||adversarial - original|| / 2^steps of the crossing it converges to.
/// Consumes exactly `steps` queries; endpoints are trusted (see
/// check_start_points).
std::vector<double> binary_search_to_boundary(AttackObjective& objective,
                                              std::span<const double> original,
                                              std::span<const double> adversarial,
                                              std::size_t steps);

}  // namespace occam
