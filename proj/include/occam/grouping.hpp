#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "occam/rng.hpp"

namespace occam {

/// The decomposition strategy pool, in fixed reward order.
enum class Strategy { SG = 0, RG = 1, MiVG = 2, MaVG = 3 };

const char* strategy_name(Strategy s);

/// Disjoint, exhaustive, non-empty index groups over {0..n-1}.
struct Partition {
  std::vector<std::vector<std::size_t>> groups;
};

/// Adaptive-decomposition bookkeeping: group count m, per-strategy rewards
/// R, and the size records Delta = (delta_{m/2}, delta_m, delta_{2m})
/// driving the halve/double decision.
struct GroupingState {
  std::size_t m = 1;
  std::array<double, 4> rewards{};       // R, indexed by Strategy
  std::array<double, 3> size_records{};  // Delta
  double last_best = 0.0;                // v, best fitness of the last cycle
  std::optional<Strategy> forced;        // single-strategy pool override
};

/// Softmax over rewards: prob_j = exp(r_j) / sum_k exp(r_k).
std::array<double, 4> strategy_probabilities(const std::array<double, 4>& rewards);

/// Categorical draw from strategy_probabilities; the forced override
/// returns directly without consuming randomness.
Strategy select_strategy(const GroupingState& state, Rng& rng);

/// Splits {0..n-1} into m groups of size floor(n/m), the first n mod m
/// groups one larger.
///   SG    contiguous blocks in time order
///   RG    random permutation split into blocks
///   MiVG  indices sorted by cov_diag, split into contiguous blocks
///   MaVG  indices sorted by cov_diag, dealt round-robin across groups
Partition partition(std::size_t n, std::size_t m, Strategy strategy,
                    std::span<const double> cov_diag, Rng& rng);

/// End-of-cycle reward: r_strategy = delta_m = |(v - v_new) / (v * m)|,
/// zero when v is zero (converged).
void record_cycle_reward(GroupingState& state, Strategy strategy, double v,
                         double v_new);

/// Pilot tests and group resizing. run_pilot(trial_m) optimizes G1 of a
/// trial_m-partition and returns (best fitness before, after); its record
/// is |(v - v') / v|. The group count halves or doubles only on a strict
/// maximum of Delta, with the records shifted accordingly. Returns the new
/// m.
std::size_t pilot_and_resize(
    GroupingState& state, std::size_t n,
    const std::function<std::pair<double, double>(std::size_t)>& run_pilot);

}  // namespace occam
