#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace occam {

/// Deterministic random stream for a whole attack run. One instance is
/// seeded from the experiment config and threaded through every stochastic
/// operation, so identical (config, seed) pairs replay identically.
///
/// The Gaussian is generated explicitly (Box-Muller) instead of through
/// std::normal_distribution, whose draw sequence is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0, 1]; safe as a log() argument.
  double uniform_open() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform on [lo, hi).
  double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [lo, hi], rejection-sampled so every value is
  /// equally likely.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t range = hi - lo + 1;
    if (range == 0) return engine_();  // full 64-bit range
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return lo + draw % range;
  }

  /// Standard normal.
  double normal() {
    const double u1 = uniform_open();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
  }

 private:
  static constexpr double pi = 3.141592653589793238462643383279502884;
  std::mt19937_64 engine_;
};

}  // namespace occam
