#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "occam/oracle.hpp"

namespace occam {

enum class AttackMode { Targeted, Untargeted };

/// What counts as adversarial: label == target_label (targeted) or
/// label != original_label (untargeted).
struct TargetSpec {
  AttackMode mode = AttackMode::Targeted;
  std::string target_label;    // y*, required when targeted
  std::string original_label;  // f(x), required when untargeted

  /// Throws ValidationError when the label required by the mode is missing.
  void validate() const;
};

/// Extended-real loss value. The +inf sentinel is carried as an explicit
/// flag; comparisons go through better_than() so no arithmetic ever mixes
/// with the infinity.
struct ObjectiveValue {
  double value = std::numeric_limits<double>::infinity();
  bool adversarial = false;

  /// Strictly-smaller-finite ordering: a finite value beats +inf, and a
  /// smaller finite value beats a larger one.
  bool better_than(const ObjectiveValue& other) const {
    if (!adversarial) return false;
    return !other.adversarial || value < other.value;
  }
};

/// The decision-only loss: distance to the original when the candidate is
/// adversarial, +inf otherwise. Each evaluate() consumes exactly one
/// oracle query.
class AttackObjective {
 public:
  AttackObjective(Oracle& oracle, TargetSpec target, std::vector<double> original);

  ObjectiveValue evaluate(std::span<const double> candidate);

  const std::vector<double>& original() const { return original_; }
  const TargetSpec& target() const { return target_; }
  Oracle& oracle() { return oracle_; }
  std::size_t query_count() const { return oracle_.ledger().count(); }

 private:
  Oracle& oracle_;
  TargetSpec target_;
  std::vector<double> original_;
};

}  // namespace occam
