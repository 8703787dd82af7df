#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "occam/audio.hpp"
#include "occam/grouping.hpp"
#include "occam/objective.hpp"

namespace occam {

struct AttackConfig {
  std::size_t total_queries = 30000;         // T
  std::size_t binary_search_steps = 15;      // b
  std::size_t offsprings_per_subspace = 30;  // lambda
  double initial_mu = 0.08;
  double c_c = 0.01;
  double c_cov = 0.001;
  std::uint64_t seed = 0;

  /// Baseline hooks: pinning the group count disables resizing; turning
  /// adaptive grouping off removes strategy selection, rewards and pilots.
  std::optional<std::size_t> pinned_group_count;
  bool adaptive_grouping = true;
  bool run_pilot_tests = true;
  std::optional<Strategy> forced_strategy;
};

struct TraceRow {
  std::size_t queries = 0;   // ledger count
  std::size_t sampled = 0;   // offspring drawn (filtered ones never query)
  double best_distance = 0.0;
  std::size_t group_count = 1;  // m
  std::string strategy;
  double sigma = 0.0;
};

struct AttackResult {
  std::vector<double> adversarial;
  int sample_rate = 16000;
  double final_distance = 0.0;
  double snr_db = 0.0;  // NaN when undefined
  std::size_t queries = 0;
  bool success = false;
  std::vector<TraceRow> trace;
};

/// Gathered view of one subgroup, in the group's index order.
struct Subspace {
  std::vector<double> x_sub;
  std::vector<double> xstar_sub;
  std::vector<double> cov_sub;
};

/// Throws ValidationError for an out-of-range index.
Subspace extract_subspace(std::span<const double> x, std::span<const double> xstar,
                          std::span<const double> cov_diag,
                          std::span<const std::size_t> group);

/// Scatters a subgroup back; untouched indices keep their values. Throws
/// ValidationError on length mismatch.
void embed_subspace(std::vector<double>& xstar, std::vector<double>& cov_diag,
                    std::span<const std::size_t> group,
                    std::span<const double> xstar_sub,
                    std::span<const double> cov_sub);

/// The full cooperative-co-evolution attack loop: binary-search projection
/// each cycle, adaptive strategy/size selection, per-subgroup (1+1)-CMA-ES
/// with greedy acceptance, and budget-bounded termination. Total queries
/// stay under total_queries + lambda + binary_search_steps.
AttackResult run_occam(const AttackConfig& config, AttackObjective& objective,
                       const AudioVector& original,
                       const AudioVector& initial_adversarial);

}  // namespace occam
