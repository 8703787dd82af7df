#include "occam/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "occam/errors.hpp"

namespace occam {

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::SG: return "SG";
    case Strategy::RG: return "RG";
    case Strategy::MiVG: return "MiVG";
    case Strategy::MaVG: return "MaVG";
  }
  return "?";
}

std::array<double, 4> strategy_probabilities(const std::array<double, 4>& rewards) {
  // max-shifted softmax; equal rewards come out as exactly 0.25 each
  const double top = *std::max_element(rewards.begin(), rewards.end());
  std::array<double, 4> probs{};
  double sum = 0.0;
  for (std::size_t j = 0; j < 4; ++j) {
    probs[j] = std::exp(rewards[j] - top);
    sum += probs[j];
  }
  for (double& p : probs) p /= sum;
  return probs;
}

Strategy select_strategy(const GroupingState& state, Rng& rng) {
  if (state.forced) return *state.forced;
  const auto probs = strategy_probabilities(state.rewards);
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (std::size_t j = 0; j < 4; ++j) {
    cumulative += probs[j];
    if (u < cumulative) return static_cast<Strategy>(j);
  }
  return Strategy::MaVG;  // u landed on accumulated rounding
}

namespace {

// group g gets floor(n/m) indices, the first n mod m groups one extra
std::vector<std::vector<std::size_t>> chunk(const std::vector<std::size_t>& order,
                                            std::size_t m) {
  const std::size_t n = order.size();
  const std::size_t base = n / m;
  const std::size_t extra = n % m;
  std::vector<std::vector<std::size_t>> groups(m);
  std::size_t pos = 0;
  for (std::size_t g = 0; g < m; ++g) {
    const std::size_t size = base + (g < extra ? 1 : 0);
    groups[g].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                     order.begin() + static_cast<std::ptrdiff_t>(pos + size));
    pos += size;
  }
  return groups;
}

std::vector<std::vector<std::size_t>> round_robin(const std::vector<std::size_t>& order,
                                                  std::size_t m) {
  std::vector<std::vector<std::size_t>> groups(m);
  for (std::size_t j = 0; j < order.size(); ++j) groups[j % m].push_back(order[j]);
  return groups;
}

std::vector<std::size_t> sorted_by_cov(std::size_t n, std::span<const double> cov_diag) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (cov_diag[a] != cov_diag[b]) return cov_diag[a] < cov_diag[b];
    return a < b;  // deterministic tie-break
  });
  return order;
}

}  // namespace

Partition partition(std::size_t n, std::size_t m, Strategy strategy,
                    std::span<const double> cov_diag, Rng& rng) {
  if (n < 1) throw ValidationError("partition needs n >= 1");
  if (m < 1 || m > n) throw ValidationError("group count must satisfy 1 <= m <= n");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  Partition part;
  switch (strategy) {
    case Strategy::SG:
      part.groups = chunk(order, m);
      break;
    case Strategy::RG:
      for (std::size_t i = 0; i + 1 < n; ++i) {
        const std::size_t j = static_cast<std::size_t>(rng.uniform_int(i, n - 1));
        std::swap(order[i], order[j]);
      }
      part.groups = chunk(order, m);
      break;
    case Strategy::MiVG:
      if (cov_diag.size() != n) throw DimensionError("cov_diag length must equal n");
      part.groups = chunk(sorted_by_cov(n, cov_diag), m);
      break;
    case Strategy::MaVG:
      if (cov_diag.size() != n) throw DimensionError("cov_diag length must equal n");
      part.groups = round_robin(sorted_by_cov(n, cov_diag), m);
      break;
  }
  return part;
}

void record_cycle_reward(GroupingState& state, Strategy strategy, double v, double v_new) {
  double reward = 0.0;
  if (v > 0.0) reward = std::abs((v - v_new) / (v * static_cast<double>(state.m)));
  state.rewards[static_cast<std::size_t>(strategy)] = reward;
  state.size_records[1] = reward;  // delta_m
  state.last_best = v_new;
}

std::size_t pilot_and_resize(
    GroupingState& state, std::size_t n,
    const std::function<std::pair<double, double>(std::size_t)>& run_pilot) {
  auto pilot_record = [&](std::size_t trial_m) {
    const auto [v, v_new] = run_pilot(trial_m);
    return v > 0.0 ? std::abs((v - v_new) / v) : 0.0;
  };

  auto& delta = state.size_records;
  if (delta[0] == 0.0 && state.m / 2 >= 1) delta[0] = pilot_record(state.m / 2);
  if (delta[2] == 0.0 && 2 * state.m <= n) delta[2] = pilot_record(2 * state.m);

  if (delta[0] > delta[1] && delta[0] > delta[2]) {
    state.m /= 2;
    delta = {0.0, delta[0], delta[1]};
  } else if (delta[2] > delta[0] && delta[2] > delta[1]) {
    state.m *= 2;
    delta = {delta[1], delta[2], 0.0};
  }
  return state.m;
}

}  // namespace occam
