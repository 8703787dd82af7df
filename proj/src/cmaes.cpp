#include "occam/cmaes.hpp"

#include <cmath>

#include "occam/audio.hpp"
#include "occam/errors.hpp"

namespace occam {

CmaState init_state(std::size_t dim, double mu0, double c_c, double c_cov) {
  if (dim < 1) throw ValidationError("subspace dimension must be >= 1");
  if (mu0 < 0.0) throw ValidationError("mu must be non-negative");
  if (c_c <= 0.0 || c_c > 1.0) throw ValidationError("c_c must be in (0, 1]");
  if (c_cov <= 0.0 || c_cov > 1.0) throw ValidationError("c_cov must be in (0, 1]");
  CmaState state;
  state.dim = dim;
  state.mu = mu0;
  state.cov_diag.assign(dim, 1.0);
  state.path.assign(dim, 0.0);
  state.c_c = c_c;
  state.c_cov = c_cov;
  return state;
}

Offspring sample_offspring(const CmaState& state, std::span<const double> x_sub,
                           std::span<const double> xstar_sub, Rng& rng) {
  if (x_sub.size() != state.dim || xstar_sub.size() != state.dim)
    throw DimensionError("subvector length differs from subspace dimension");

  Offspring off;
  off.noise.resize(state.dim);
  off.candidate.resize(state.dim);
  for (std::size_t i = 0; i < state.dim; ++i) {
    const double z = state.sigma * std::sqrt(state.cov_diag[i]) * rng.normal();
    off.noise[i] = z;
    const double biased = xstar_sub[i] + state.mu * (x_sub[i] - xstar_sub[i]) + z;
    off.candidate[i] = clamp_amplitude(biased);
  }
  return off;
}

void update_on_success(CmaState& state, std::span<const double> noise) {
  if (noise.size() != state.dim)
    throw DimensionError("noise length differs from subspace dimension");
  if (state.sigma == 0.0) {
    // z / sigma is undefined; happens only at exact convergence
    state.sigma_zero_update_skipped = true;
    return;
  }
  const double path_gain = std::sqrt(state.c_c * (2.0 - state.c_c));
  for (std::size_t i = 0; i < state.dim; ++i) {
    state.path[i] = (1.0 - state.c_c) * state.path[i] + path_gain * noise[i] / state.sigma;
    state.cov_diag[i] =
        (1.0 - state.c_cov) * state.cov_diag[i] + state.c_cov * state.path[i] * state.path[i];
  }
}

void adapt_mu(CmaState& state, bool success) {
  state.mu *= success ? 1.5 : std::pow(1.5, -0.25);
}

void set_sigma_from_distance(CmaState& state, double distance) {
  if (distance < 0.0) throw ValidationError("distance must be non-negative");
  state.sigma = 0.001 * distance;
}

}  // namespace occam
