#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "occam/rng.hpp"

namespace occam {

/// State of the modified (1+1)-CMA-ES on one subspace: global step size
/// sigma, proximity bias mu, diagonal covariance, and the evolution path
/// feeding the covariance adaptation.
struct CmaState {
  std::size_t dim = 0;
  double sigma = 0.0;
  double mu = 0.0;
  std::vector<double> cov_diag;  // diagonal of C, strictly positive
  std::vector<double> path;      // evolution path P
  double c_c = 0.01;             // path learning rate
  double c_cov = 0.001;          // covariance learning rate
  bool sigma_zero_update_skipped = false;
};

/// Identity covariance, zero path. Throws ValidationError for dim < 1.
CmaState init_state(std::size_t dim, double mu0 = 0.08, double c_c = 0.01,
                    double c_cov = 0.001);

struct Offspring {
  std::vector<double> candidate;  // clamped to [-1, 1]
  std::vector<double> noise;      // the raw z that produced it
};

/// candidate = xstar_sub + mu * (x_sub - xstar_sub) + z with
/// z_i ~ N(0, sigma^2 * cov_diag_i), clamped to the valid amplitude range.
Offspring sample_offspring(const CmaState& state, std::span<const double> x_sub,
                           std::span<const double> xstar_sub, Rng& rng);

/// Path and covariance update after an accepted offspring:
///   P <- (1 - c_c) P + sqrt(c_c (2 - c_c)) z / sigma
///   C_i <- (1 - c_cov) C_i + c_cov P_i^2
/// Skipped (and flagged) when sigma is zero.
void update_on_success(CmaState& state, std::span<const double> noise);

/// 1/5th success rule: mu *= 1.5 on success, mu *= 1.5^(-1/4) on failure.
void adapt_mu(CmaState& state, bool success);

/// sigma = 0.001 * distance; refreshed whenever the incumbent changes.
void set_sigma_from_distance(CmaState& state, double distance);

}  // namespace occam
