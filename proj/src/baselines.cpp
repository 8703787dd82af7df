#include "occam/baselines.hpp"

#include <cmath>
#include <limits>

#include "occam/errors.hpp"
#include "occam/rng.hpp"

namespace occam {

std::vector<double> dea_mutant(std::span<const double> base, std::span<const double> x,
                               std::span<const double> a, std::span<const double> b,
                               double bias_draw, double differential_weight) {
  if (base.size() != x.size() || base.size() != a.size() || base.size() != b.size())
    throw DimensionError("dea_mutant vectors differ in length");
  std::vector<double> mutant(base.size());
  for (std::size_t i = 0; i < base.size(); ++i)
    mutant[i] = base[i] + bias_draw * (x[i] - base[i]) + differential_weight * (a[i] - b[i]);
  return mutant;
}

AttackResult run_dea(const DeaConfig& config, AttackObjective& objective,
                     const AudioVector& original,
                     const AudioVector& initial_adversarial) {
  if (config.population < 4)
    throw ValidationError("DEA needs population >= 4 for three distinct partners plus self");
  if (!(config.differential_weight > 0.0))
    throw ValidationError("differential weight must be positive");
  if (config.init_sigma < 0.0) throw ValidationError("init sigma must be non-negative");
  if (config.bias_cap < 0.0) throw ValidationError("bias cap must be non-negative");
  if (original.size() != initial_adversarial.size())
    throw DimensionError("original and initial adversarial audio differ in length");
  if (objective.original() != original.samples())
    throw ValidationError("objective is bound to a different original");

  const std::size_t np = config.population;
  const std::size_t n = original.size();
  const auto& x = original.samples();

  Rng rng(config.seed);
  std::vector<std::vector<double>> pop(np);
  std::vector<ObjectiveValue> losses(np);
  std::vector<TraceRow> trace;
  std::size_t sampled = 0;
  std::size_t best = 0;

  auto record = [&](std::size_t generation) {
    const double best_distance = losses[best].adversarial
                                     ? losses[best].value
                                     : std::numeric_limits<double>::infinity();
    trace.push_back({objective.query_count(), sampled, best_distance, np,
                     generation == 0 ? "init" : "dea", config.init_sigma});
  };

  try {
    for (std::size_t i = 0; i < np; ++i) {
      pop[i].resize(n);
      for (std::size_t k = 0; k < n; ++k)
        pop[i][k] = clamp_amplitude(initial_adversarial.samples()[k] +
                                    config.init_sigma * rng.normal());
      ++sampled;
      losses[i] = objective.evaluate(pop[i]);
      if (losses[i].better_than(losses[best])) best = i;
    }
    record(0);

    std::vector<std::vector<double>> mutants(np);
    for (std::size_t g = 0; g < config.generations; ++g) {
      // mutation: all mutants come from the generation-g population
      for (std::size_t i = 0; i < np; ++i) {
        std::size_t r1, r2, r3;
        do r1 = rng.uniform_int(0, np - 1); while (r1 == i);
        do r2 = rng.uniform_int(0, np - 1); while (r2 == i || r2 == r1);
        do r3 = rng.uniform_int(0, np - 1); while (r3 == i || r3 == r1 || r3 == r2);
        const double bias = rng.uniform_real(0.0, config.bias_cap);
        mutants[i] = dea_mutant(pop[r1], x, pop[r2], pop[r3], bias,
                                config.differential_weight);
        for (double& v : mutants[i]) v = clamp_amplitude(v);
        ++sampled;
      }
      // selection: elitist replacement on strictly smaller loss
      for (std::size_t i = 0; i < np; ++i) {
        const ObjectiveValue value = objective.evaluate(mutants[i]);
        if (value.better_than(losses[i])) {
          pop[i] = mutants[i];
          losses[i] = value;
          if (value.better_than(losses[best])) best = i;
        }
      }
      record(g + 1);
    }
  } catch (const BudgetError&) {
    // ledger cap reached: return the incumbent population's best
  }

  AttackResult result;
  result.adversarial = pop[best];
  result.sample_rate = original.sample_rate();
  result.final_distance = l2_distance(result.adversarial, x);
  try {
    result.snr_db = snr_db(x, result.adversarial);
  } catch (const SnrUndefinedError&) {
    result.snr_db = std::numeric_limits<double>::quiet_NaN();
  }
  result.queries = objective.query_count();
  result.success = losses[best].adversarial;
  result.trace = std::move(trace);
  return result;
}

AttackResult run_evolutionary(const AttackConfig& config, AttackObjective& objective,
                              const AudioVector& original,
                              const AudioVector& initial_adversarial) {
  AttackConfig pinned = config;
  pinned.pinned_group_count = 1;
  pinned.adaptive_grouping = false;
  pinned.run_pilot_tests = false;
  if (!pinned.forced_strategy) pinned.forced_strategy = Strategy::SG;
  return run_occam(pinned, objective, original, initial_adversarial);
}

}  // namespace occam
