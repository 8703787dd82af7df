#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "occam/audio.hpp"

namespace occam {

/// Substitute model interface for gradient inversion: a loss over a
/// candidate audio and a per-frame class-label target, with its gradient.
class DifferentiableModel {
 public:
  virtual ~DifferentiableModel() = default;
  virtual double loss(std::span<const double> candidate,
                      std::span<const int> target) const = 0;
  virtual std::vector<double> gradient(std::span<const double> candidate,
                                       std::span<const int> target) const = 0;
};

/// Desk-scale stand-in for an acoustic model: a linear classifier per
/// frame with softmax cross-entropy against the target class sequence.
class ToySubstituteModel : public DifferentiableModel {
 public:
  /// weights: classes x frame_length, one row per class.
  ToySubstituteModel(std::size_t frame_length, std::vector<std::vector<double>> weights,
                     std::vector<double> biases);

  static ToySubstituteModel random(std::size_t frame_length, std::size_t classes,
                                   std::uint64_t seed, double scale = 0.05);

  std::size_t frame_length() const { return frame_length_; }
  std::size_t classes() const { return weights_.size(); }

  /// Mean softmax cross-entropy over frames and its gradient with respect
  /// to the candidate. Candidate length must be a whole number of frames
  /// and target must hold one class per frame.
  std::pair<double, std::vector<double>> loss_and_grad(
      std::span<const double> candidate, std::span<const int> target) const;

  double loss(std::span<const double> candidate,
              std::span<const int> target) const override;
  std::vector<double> gradient(std::span<const double> candidate,
                               std::span<const int> target) const override;

 private:
  std::size_t frame_length_;
  std::vector<std::vector<double>> weights_;
  std::vector<double> biases_;
};

struct AdaBeliefState {
  std::vector<double> first_moment;   // m
  std::vector<double> second_moment;  // s, the belief term
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t step_count = 0;  // t
};

/// One bias-corrected AdaBelief update:
///   m <- b1 m + (1-b1) g;  s <- b2 s + (1-b2) (g - m)^2
///   params -= lr * (m / (1-b1^t)) / (sqrt(s / (1-b2^t)) + eps)
void adabelief_step(AdaBeliefState& state, std::vector<double>& params,
                    std::span<const double> gradient, double learning_rate);

struct InversionConfig {
  double learning_rate = 0.003;  // alpha
  double noise_std = 0.25;       // sigma
  double noise_decay = 0.998;
  double epsilon = 0.3;          // L-inf perturbation bound
  std::size_t iterations = 2000;
  bool plateau_stop = false;     // optional early stop on stalled loss
  double plateau_rel_tol = 1e-5;
  std::size_t plateau_window = 50;
  std::uint64_t seed = 0;
};

struct InversionRun {
  std::vector<std::vector<double>> iterates;  // X*, one per iteration
  std::vector<double> losses;                 // loss of each iterate (no noise)
  std::vector<double> sigmas;                 // sigma used at each iteration
  std::size_t best_index = 0;                 // minimum-loss iterate
  double final_sigma = 0.0;
};

/// Noise-blended gradient inversion: from x* = x, each iteration draws
/// z ~ N(0, sigma^2), steps x* with AdaBelief on the gradient of
/// J(z + x*, y), clips x* into the L-inf epsilon ball around x (and the
/// valid amplitude range), and decays sigma. Never touches an oracle.
InversionRun run_ni_occam(const InversionConfig& config, const DifferentiableModel& model,
                          const AudioVector& original, std::span<const int> target);

}  // namespace occam
