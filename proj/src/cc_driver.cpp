#include "occam/cc_driver.hpp"

#include <cmath>
#include <limits>

#include "occam/boundary.hpp"
#include "occam/cmaes.hpp"
#include "occam/errors.hpp"
#include "occam/log.hpp"

namespace occam {

Subspace extract_subspace(std::span<const double> x, std::span<const double> xstar,
                          std::span<const double> cov_diag,
                          std::span<const std::size_t> group) {
  Subspace sub;
  sub.x_sub.reserve(group.size());
  sub.xstar_sub.reserve(group.size());
  sub.cov_sub.reserve(group.size());
  for (std::size_t idx : group) {
    if (idx >= x.size()) throw ValidationError("subspace index out of range");
    sub.x_sub.push_back(x[idx]);
    sub.xstar_sub.push_back(xstar[idx]);
    sub.cov_sub.push_back(cov_diag[idx]);
  }
  return sub;
}

void embed_subspace(std::vector<double>& xstar, std::vector<double>& cov_diag,
                    std::span<const std::size_t> group,
                    std::span<const double> xstar_sub,
                    std::span<const double> cov_sub) {
  if (group.size() != xstar_sub.size() || group.size() != cov_sub.size())
    throw ValidationError("subspace length differs from group size");
  for (std::size_t i = 0; i < group.size(); ++i) {
    if (group[i] >= xstar.size()) throw ValidationError("subspace index out of range");
    xstar[group[i]] = xstar_sub[i];
    cov_diag[group[i]] = cov_sub[i];
  }
}

namespace {

double squared_gap(std::span<const double> a, std::span<const double> b) {
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sq += d * d;
  }
  return sq;
}

/// Everything one attack run mutates, shared between the main loop and the
/// pilot-test callbacks.
struct RunState {
  const AttackConfig& cfg;
  AttackObjective& obj;
  const std::vector<double>& x;
  std::vector<double> xstar;
  std::vector<double> scratch;  // == xstar away from the candidate group
  std::vector<double> cov;
  double mu;
  double dist = 0.0;
  std::size_t sampled = 0;
  Rng rng;

  RunState(const AttackConfig& cfg_, AttackObjective& obj_, const std::vector<double>& x_,
           std::vector<double> xstar_)
      : cfg(cfg_), obj(obj_), x(x_), xstar(std::move(xstar_)), scratch(xstar),
        cov(x_.size(), 1.0), mu(cfg_.initial_mu), rng(cfg_.seed) {}

  std::size_t queries() const { return obj.query_count(); }
  bool budget_spent() const { return queries() >= cfg.total_queries; }

  /// One subspace optimization: lambda biased offspring with greedy
  /// acceptance, path/covariance adaptation on success, merge at the end.
  void optimize_subgroup(const std::vector<std::size_t>& group) {
    Subspace sub = extract_subspace(x, xstar, cov, group);
    CmaState st = init_state(group.size(), mu, cfg.c_c, cfg.c_cov);
    st.cov_diag = sub.cov_sub;
    set_sigma_from_distance(st, dist);

    // the candidate differs from the incumbent only inside the group, so
    // the farther-candidate filter reduces to the subgroup contribution
    double sub_sq = squared_gap(sub.xstar_sub, sub.x_sub);

    for (std::size_t i = 0; i < cfg.offsprings_per_subspace; ++i) {
      Offspring off = sample_offspring(st, sub.x_sub, sub.xstar_sub, rng);
      ++sampled;

      const double cand_sq = squared_gap(off.candidate, sub.x_sub);
      if (cand_sq >= sub_sq) {
        // farther from the original: removed without spending a query
        adapt_mu(st, false);
        continue;
      }

      for (std::size_t k = 0; k < group.size(); ++k) scratch[group[k]] = off.candidate[k];
      const ObjectiveValue value = obj.evaluate(scratch);
      if (value.adversarial && value.value < dist) {
        sub.xstar_sub = off.candidate;
        for (std::size_t k = 0; k < group.size(); ++k) xstar[group[k]] = off.candidate[k];
        dist = value.value;
        sub_sq = cand_sq;
        update_on_success(st, off.noise);
        set_sigma_from_distance(st, dist);
        adapt_mu(st, true);
      } else {
        for (std::size_t k = 0; k < group.size(); ++k) scratch[group[k]] = sub.xstar_sub[k];
        adapt_mu(st, false);
      }
    }

    embed_subspace(xstar, cov, group, sub.xstar_sub, st.cov_diag);
    mu = st.mu;
  }
};

}  // namespace

AttackResult run_occam(const AttackConfig& config, AttackObjective& objective,
                       const AudioVector& original,
                       const AudioVector& initial_adversarial) {
  if (config.total_queries <= config.binary_search_steps)
    throw ValidationError("total_queries must exceed binary_search_steps");
  if (config.offsprings_per_subspace < 1)
    throw ValidationError("offsprings_per_subspace must be >= 1");
  if (original.size() != initial_adversarial.size())
    throw DimensionError("original and initial adversarial audio differ in length");
  if (original.sample_rate() != initial_adversarial.sample_rate())
    throw ValidationError("original and initial adversarial audio differ in sample rate");
  if (objective.original() != original.samples())
    throw ValidationError("objective is bound to a different original");

  const std::size_t n = original.size();
  RunState run(config, objective, original.samples(), initial_adversarial.samples());

  GroupingState gs;
  gs.m = config.pinned_group_count.value_or(1);
  if (gs.m < 1 || gs.m > n) throw ValidationError("pinned group count must satisfy 1 <= m <= n");
  gs.forced = config.forced_strategy;

  check_start_points(objective, run.x, run.xstar);

  std::vector<TraceRow> trace;
  std::string current_strategy = "init";
  std::size_t current_m = gs.m;
  auto record = [&] {
    trace.push_back({run.queries(), run.sampled, run.dist, current_m, current_strategy,
                     0.001 * run.dist});
  };

  try {
    run.xstar = binary_search_to_boundary(objective, run.x, run.xstar,
                                          config.binary_search_steps);
    run.scratch = run.xstar;
    run.dist = l2_distance(run.xstar, run.x);
    record();

    bool first_cycle = true;
    while (!run.budget_spent()) {
      if (!first_cycle) {
        run.xstar = binary_search_to_boundary(objective, run.x, run.xstar,
                                              config.binary_search_steps);
        run.scratch = run.xstar;
        run.dist = l2_distance(run.xstar, run.x);
      }
      first_cycle = false;

      Strategy strategy = Strategy::SG;
      if (config.forced_strategy)
        strategy = *config.forced_strategy;
      else if (config.adaptive_grouping)
        strategy = select_strategy(gs, run.rng);
      current_strategy = strategy_name(strategy);

      const Partition part = partition(n, gs.m, strategy, run.cov, run.rng);
      current_m = gs.m;
      const double cycle_start_best = run.dist;

      bool stopped = false;
      for (const auto& group : part.groups) {
        run.optimize_subgroup(group);
        if (run.budget_spent()) {
          stopped = true;
          break;
        }
      }

      if (!stopped && config.adaptive_grouping) {
        record_cycle_reward(gs, strategy, cycle_start_best, run.dist);
        if (config.run_pilot_tests && !config.pinned_group_count) {
          pilot_and_resize(gs, n, [&](std::size_t trial_m) -> std::pair<double, double> {
            if (run.budget_spent()) return {run.dist, run.dist};
            const Partition trial = partition(n, trial_m, strategy, run.cov, run.rng);
            const double before = run.dist;
            run.optimize_subgroup(trial.groups.front());
            return {before, run.dist};
          });
        }
      }
      record();
      log_debug("cycle done: queries=" + std::to_string(run.queries()) +
                " dist=" + std::to_string(run.dist) + " m=" + std::to_string(gs.m));
    }
  } catch (const BudgetError&) {
    // ledger cap reached: terminate normally with the incumbent
  }

  if (trace.empty() || trace.back().queries != run.queries() ||
      trace.back().best_distance != run.dist)
    record();

  AttackResult result;
  result.adversarial = std::move(run.xstar);
  result.sample_rate = original.sample_rate();
  result.final_distance = run.dist;
  try {
    result.snr_db = snr_db(run.x, result.adversarial);
  } catch (const SnrUndefinedError&) {
    result.snr_db = std::numeric_limits<double>::quiet_NaN();
  }
  result.queries = run.queries();
  result.success = true;  // greedy acceptance never leaves the adversarial region
  result.trace = std::move(trace);
  return result;
}

}  // namespace occam
