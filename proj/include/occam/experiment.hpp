#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "occam/baselines.hpp"
#include "occam/cc_driver.hpp"
#include "occam/inversion.hpp"
#include "occam/objective.hpp"
#include "occam/oracle.hpp"

namespace occam {

enum class AttackKind { Occam, Evolutionary, Dea, NiOccam };

/// Toy-model description for ni-occam runs.
struct ModelSpec {
  std::size_t frame_length = 160;
  std::size_t classes = 4;
  double weight_scale = 0.05;
  std::uint64_t seed = 0;
};

/// One experiment, parsed from a flat JSON config (see README).
struct ExperimentConfig {
  AttackKind attack = AttackKind::Occam;
  std::uint64_t seed = 0;
  std::size_t budget = 30000;  // T
  std::string output_dir;
  std::string original_path;

  // decision attacks
  std::optional<OracleSpec> oracle;
  std::optional<TargetSpec> target;
  std::string initial_adversarial_path;
  AttackConfig occam;  // binary_search_steps / lambda / mu / c_c / c_cov
  DeaConfig dea;

  // ni-occam
  std::optional<ModelSpec> model;
  InversionConfig inversion;
  std::string target_sequence_path;
};

const char* attack_kind_name(AttackKind kind);

/// Parses and validates; throws ValidationError (missing files, missing
/// attack-specific fields, malformed JSON).
ExperimentConfig load_experiment_config(const std::string& path);

/// Target class sequence: one integer per line, one line per frame.
std::vector<int> load_target_sequence(const std::string& path);

/// Writes result.json, trace.csv and adversarial.wav into dir. Re-checks
/// the non-increasing trace invariant while writing.
void write_report(const AttackResult& result, const AudioVector& original,
                  const std::string& attack_name, std::uint64_t seed,
                  const std::string& dir);

/// Runs the configured attack and writes its report. Returns the process
/// exit status: 0 success, 2 validation error, 3 finished without an
/// adversarial incumbent. Errors go to stderr as "error[<code>]: ...".
int run_experiment(const std::string& config_path);

}  // namespace occam
