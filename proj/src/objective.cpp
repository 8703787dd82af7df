#include "occam/objective.hpp"

#include "occam/audio.hpp"
#include "occam/errors.hpp"

namespace occam {

void TargetSpec::validate() const {
  if (mode == AttackMode::Targeted && target_label.empty())
    throw ValidationError("targeted attack requires a non-empty target_label");
  if (mode == AttackMode::Untargeted && original_label.empty())
    throw ValidationError("untargeted attack requires a non-empty original_label");
}

AttackObjective::AttackObjective(Oracle& oracle, TargetSpec target,
                                 std::vector<double> original)
    : oracle_(oracle), target_(std::move(target)), original_(std::move(original)) {
  target_.validate();
  if (original_.empty()) throw ValidationError("objective needs a non-empty original");
}

ObjectiveValue AttackObjective::evaluate(std::span<const double> candidate) {
  if (candidate.size() != original_.size())
    throw DimensionError("candidate length differs from original");
  const Decision decision = oracle_.query(candidate);
  const bool adversarial = target_.mode == AttackMode::Targeted
                               ? decision.label == target_.target_label
                               : decision.label != target_.original_label;
  if (!adversarial) return {};
  return {l2_distance(candidate, original_), true};
}

}  // namespace occam
