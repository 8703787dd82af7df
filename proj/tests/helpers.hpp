#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "occam/audio.hpp"
#include "occam/objective.hpp"
#include "occam/oracle.hpp"
#include "occam/rng.hpp"

namespace occam::testing {

/// Ball-oracle instance with a closed-form optimum:
/// min adversarial distance = ||x - center|| - radius.
struct BallProblem {
  std::unique_ptr<Oracle> oracle;
  std::unique_ptr<AttackObjective> objective;
  AudioVector original;
  AudioVector initial;
  double optimum;
};

/// Random original in [-0.3, 0.3]^n, ball center at the requested distance
/// along a random direction, initial adversarial point inside the ball but
/// off-center (so the straight segment to the original is not optimal).
inline BallProblem make_ball_problem(std::size_t n, std::uint64_t seed,
                                     double center_distance = 0.5,
                                     double radius = 0.2) {
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);  // decouple from attack seeds

  std::vector<double> x(n);
  for (double& v : x) v = rng.uniform_real(-0.3, 0.3);

  std::vector<double> dir(n);
  double norm = 0.0;
  for (double& v : dir) {
    v = rng.normal();
    norm += v * v;
  }
  norm = std::sqrt(norm);

  std::vector<double> center(n);
  for (std::size_t i = 0; i < n; ++i)
    center[i] = x[i] + center_distance * dir[i] / norm;

  std::vector<double> off(n);
  double off_norm = 0.0;
  for (double& v : off) {
    v = rng.normal();
    off_norm += v * v;
  }
  off_norm = std::sqrt(off_norm);

  std::vector<double> init(n);
  double extent = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    init[i] = center[i] + 0.7 * radius * off[i] / off_norm;
    extent = std::max({extent, std::abs(init[i]), std::abs(x[i])});
  }

  // shrink the whole geometry when it pokes out of the amplitude box, so
  // the initial point genuinely stays inside the ball
  if (extent > 0.98) {
    const double scale = 0.98 / extent;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] *= scale;
      center[i] *= scale;
      init[i] *= scale;
    }
    center_distance *= scale;
    radius *= scale;
  }

  BallProblem problem{build_oracle(BallSpec{center, radius}),
                      nullptr,
                      AudioVector(std::move(x), 16000),
                      AudioVector(std::move(init), 16000),
                      center_distance - radius};
  problem.objective = std::make_unique<AttackObjective>(
      *problem.oracle, TargetSpec{AttackMode::Targeted, "target", ""},
      problem.original.samples());
  return problem;
}

}  // namespace occam::testing
