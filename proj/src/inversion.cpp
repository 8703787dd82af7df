#include "occam/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "occam/errors.hpp"
#include "occam/rng.hpp"

namespace occam {

ToySubstituteModel::ToySubstituteModel(std::size_t frame_length,
                                       std::vector<std::vector<double>> weights,
                                       std::vector<double> biases)
    : frame_length_(frame_length), weights_(std::move(weights)), biases_(std::move(biases)) {
  if (frame_length_ < 1) throw ValidationError("frame length must be >= 1");
  if (weights_.size() < 2) throw ValidationError("model needs at least two classes");
  if (biases_.size() != weights_.size())
    throw ValidationError("bias count differs from class count");
  for (const auto& row : weights_)
    if (row.size() != frame_length_)
      throw ValidationError("weight row length differs from frame length");
}

ToySubstituteModel ToySubstituteModel::random(std::size_t frame_length, std::size_t classes,
                                              std::uint64_t seed, double scale) {
  Rng rng(seed);
  std::vector<std::vector<double>> weights(classes, std::vector<double>(frame_length));
  std::vector<double> biases(classes);
  for (auto& row : weights)
    for (double& w : row) w = scale * rng.normal();
  for (double& b : biases) b = scale * rng.normal();
  return ToySubstituteModel(frame_length, std::move(weights), std::move(biases));
}

std::pair<double, std::vector<double>> ToySubstituteModel::loss_and_grad(
    std::span<const double> candidate, std::span<const int> target) const {
  const std::size_t L = frame_length_;
  const std::size_t K = weights_.size();
  if (candidate.empty() || candidate.size() % L != 0)
    throw ValidationError("candidate length must be a whole number of frames");
  const std::size_t frames = candidate.size() / L;
  if (target.size() != frames)
    throw ValidationError("target length differs from frame count");
  for (int t : target)
    if (t < 0 || static_cast<std::size_t>(t) >= K)
      throw ValidationError("target class out of range");

  double total = 0.0;
  std::vector<double> grad(candidate.size(), 0.0);
  std::vector<double> logits(K);
  std::vector<double> probs(K);
  const double inv_frames = 1.0 / static_cast<double>(frames);

  for (std::size_t f = 0; f < frames; ++f) {
    const double* frame = candidate.data() + f * L;
    for (std::size_t k = 0; k < K; ++k) {
      double dot = biases_[k];
      const auto& row = weights_[k];
      for (std::size_t j = 0; j < L; ++j) dot += row[j] * frame[j];
      logits[k] = dot;
    }
    const double top = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      probs[k] = std::exp(logits[k] - top);
      sum += probs[k];
    }
    for (double& p : probs) p /= sum;

    const std::size_t y = static_cast<std::size_t>(target[f]);
    // cross entropy via logsumexp keeps saturated frames finite
    total += (std::log(sum) + top - logits[y]) * inv_frames;

    double* gframe = grad.data() + f * L;
    for (std::size_t k = 0; k < K; ++k) {
      const double coeff = (probs[k] - (k == y ? 1.0 : 0.0)) * inv_frames;
      if (coeff == 0.0) continue;
      const auto& row = weights_[k];
      for (std::size_t j = 0; j < L; ++j) gframe[j] += coeff * row[j];
    }
  }
  return {total, std::move(grad)};
}

double ToySubstituteModel::loss(std::span<const double> candidate,
                                std::span<const int> target) const {
  return loss_and_grad(candidate, target).first;
}

std::vector<double> ToySubstituteModel::gradient(std::span<const double> candidate,
                                                 std::span<const int> target) const {
  return loss_and_grad(candidate, target).second;
}

void adabelief_step(AdaBeliefState& state, std::vector<double>& params,
                    std::span<const double> gradient, double learning_rate) {
  if (state.first_moment.empty()) {
    state.first_moment.assign(params.size(), 0.0);
    state.second_moment.assign(params.size(), 0.0);
  }
  if (params.size() != gradient.size() || params.size() != state.first_moment.size())
    throw DimensionError("adabelief lengths differ");

  ++state.step_count;
  const double b1 = state.beta1;
  const double b2 = state.beta2;
  const double m_corr = 1.0 - std::pow(b1, static_cast<double>(state.step_count));
  const double s_corr = 1.0 - std::pow(b2, static_cast<double>(state.step_count));

  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = gradient[i];
    double& m = state.first_moment[i];
    double& s = state.second_moment[i];
    m = b1 * m + (1.0 - b1) * g;
    const double diff = g - m;
    s = b2 * s + (1.0 - b2) * diff * diff;
    const double m_hat = m / m_corr;
    const double s_hat = s / s_corr;
    params[i] -= learning_rate * m_hat / (std::sqrt(s_hat) + state.epsilon);
  }
}

InversionRun run_ni_occam(const InversionConfig& config, const DifferentiableModel& model,
                          const AudioVector& original, std::span<const int> target) {
  if (config.epsilon < 0.0) throw ValidationError("epsilon must be non-negative");
  if (!(config.noise_decay > 0.0) || config.noise_decay > 1.0)
    throw ValidationError("noise decay must be in (0, 1]");
  if (config.noise_std < 0.0) throw ValidationError("noise std must be non-negative");
  if (!(config.learning_rate > 0.0)) throw ValidationError("learning rate must be positive");
  if (config.iterations < 1) throw ValidationError("iterations must be >= 1");

  const auto& x = original.samples();
  const std::size_t n = x.size();

  // clip box: the epsilon vicinity of x intersected with valid amplitudes
  std::vector<double> lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = std::max(x[i] - config.epsilon, -1.0);
    hi[i] = std::min(x[i] + config.epsilon, 1.0);
  }

  Rng rng(config.seed);
  std::vector<double> xstar = x;
  std::vector<double> noisy(n);
  AdaBeliefState optimizer;

  InversionRun run;
  run.iterates.reserve(config.iterations);
  run.losses.reserve(config.iterations);
  run.sigmas.reserve(config.iterations);

  double best_loss = std::numeric_limits<double>::infinity();
  std::size_t iterations_done = 0;

  for (std::size_t k = 0; k < config.iterations; ++k) {
    // sigma_k = sigma_0 * decay^k, computed in closed form so the decay
    // schedule is exact
    const double sigma = config.noise_std *
                         std::pow(config.noise_decay, static_cast<double>(k));
    for (std::size_t i = 0; i < n; ++i) noisy[i] = xstar[i] + sigma * rng.normal();

    const std::vector<double> grad = model.gradient(noisy, target);
    adabelief_step(optimizer, xstar, grad, config.learning_rate);
    for (std::size_t i = 0; i < n; ++i) xstar[i] = std::clamp(xstar[i], lo[i], hi[i]);

    const double loss = model.loss(xstar, target);
    run.iterates.push_back(xstar);
    run.losses.push_back(loss);
    run.sigmas.push_back(sigma);
    if (loss < best_loss) {
      best_loss = loss;
      run.best_index = k;
    }
    iterations_done = k + 1;

    if (config.plateau_stop && k + 1 >= config.plateau_window) {
      const double then = run.losses[k + 1 - config.plateau_window];
      double window_best = then;
      for (std::size_t j = k + 2 - config.plateau_window; j <= k; ++j)
        window_best = std::min(window_best, run.losses[j]);
      const double scale = std::max(std::abs(then), 1e-12);
      if ((then - window_best) / scale < config.plateau_rel_tol) break;
    }
  }

  run.final_sigma = config.noise_std *
                    std::pow(config.noise_decay, static_cast<double>(iterations_done));
  return run;
}

}  // namespace occam
