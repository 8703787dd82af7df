#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "occam/cc_driver.hpp"

namespace occam {

struct DeaConfig {
  std::size_t population = 10;      // NP
  std::size_t generations = 3000;   // G
  double differential_weight = 0.5; // F
  double init_sigma = 0.003;        // spread of the initial population
  double bias_cap = 0.2;            // upper bound of the per-member bias draw
  std::uint64_t seed = 0;
};

/// The raw mutation formula, unclamped:
///   base + bias_draw * (x - base) + F * (a - b)
std::vector<double> dea_mutant(std::span<const double> base, std::span<const double> x,
                               std::span<const double> a, std::span<const double> b,
                               double bias_draw, double differential_weight);

/// Differential-evolution attack: population seeded around the initial
/// adversarial audio, biased mutation toward the original, elitist
/// replacement on strictly smaller loss. Requires population >= 4 so each
/// member can draw three distinct partners besides itself.
AttackResult run_dea(const DeaConfig& config, AttackObjective& objective,
                     const AudioVector& original,
                     const AudioVector& initial_adversarial);

/// Plain (1+1)-CMA-ES baseline: run_occam with the group count pinned to 1
/// and the strategy pool and pilot tests disabled.
AttackResult run_evolutionary(const AttackConfig& config, AttackObjective& objective,
                              const AudioVector& original,
                              const AudioVector& initial_adversarial);

}  // namespace occam
