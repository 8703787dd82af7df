#include "occam/experiment.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "occam/errors.hpp"
#include "occam/log.hpp"

namespace occam {

namespace fs = std::filesystem;
using nlohmann::json;

const char* attack_kind_name(AttackKind kind) {
  switch (kind) {
    case AttackKind::Occam: return "occam";
    case AttackKind::Evolutionary: return "evolutionary";
    case AttackKind::Dea: return "dea";
    case AttackKind::NiOccam: return "ni-occam";
  }
  return "?";
}

namespace {

AttackKind parse_attack_kind(const std::string& name) {
  if (name == "occam") return AttackKind::Occam;
  if (name == "evolutionary") return AttackKind::Evolutionary;
  if (name == "dea") return AttackKind::Dea;
  if (name == "ni-occam") return AttackKind::NiOccam;
  throw ValidationError("unknown attack: " + name);
}

TargetSpec parse_target(const json& j) {
  TargetSpec target;
  const std::string mode = j.at("mode").get<std::string>();
  if (mode == "targeted")
    target.mode = AttackMode::Targeted;
  else if (mode == "untargeted")
    target.mode = AttackMode::Untargeted;
  else
    throw ValidationError("target mode must be targeted or untargeted");
  target.target_label = j.value("target_label", std::string());
  target.original_label = j.value("original_label", std::string());
  target.validate();
  return target;
}

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw ValidationError(std::string(what) + " path missing from config");
  if (!fs::exists(path)) throw ValidationError(std::string(what) + " does not exist: " + path);
}

/// Shortest decimal that round-trips; keeps the CSV both exact and
/// byte-stable across identical runs.
std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }

  ExperimentConfig cfg;
  try {
    cfg.attack = parse_attack_kind(j.at("attack").get<std::string>());
    cfg.seed = j.value("seed", 0ULL);
    cfg.budget = j.value("budget", 30000ULL);
    cfg.output_dir = j.at("output_dir").get<std::string>();
    cfg.original_path = j.at("original").get<std::string>();

    if (cfg.attack == AttackKind::NiOccam) {
      const json& m = j.at("model");
      ModelSpec model;
      model.frame_length = m.value("frame_length", 160ULL);
      model.classes = m.value("classes", 4ULL);
      model.weight_scale = m.value("weight_scale", 0.05);
      model.seed = m.value("seed", 0ULL);
      cfg.model = model;

      const json& inv = j.at("inversion");
      cfg.inversion.learning_rate = inv.value("learning_rate", 0.003);
      cfg.inversion.noise_std = inv.value("noise_std", 0.25);
      cfg.inversion.noise_decay = inv.value("noise_decay", 0.998);
      cfg.inversion.epsilon = inv.value("epsilon", 0.3);
      cfg.inversion.iterations = inv.value("iterations", 2000ULL);
      cfg.inversion.plateau_stop = inv.value("plateau_stop", false);
      cfg.inversion.plateau_rel_tol = inv.value("plateau_rel_tol", 1e-5);
      cfg.inversion.plateau_window = inv.value("plateau_window", 50ULL);
      cfg.inversion.seed = cfg.seed;
      cfg.target_sequence_path = inv.at("target_sequence").get<std::string>();
    } else {
      if (!j.contains("oracle")) throw ValidationError("decision attacks need an oracle spec");
      cfg.oracle = oracle_spec_from_json(j.at("oracle").dump());
      cfg.target = parse_target(j.at("target"));
      cfg.initial_adversarial_path = j.value("initial_adversarial", std::string());

      const json occ = j.value("occam", json::object());
      cfg.occam.binary_search_steps = occ.value("binary_search_steps", 15ULL);
      cfg.occam.offsprings_per_subspace = occ.value("lambda", 30ULL);
      cfg.occam.initial_mu = occ.value("mu", 0.08);
      cfg.occam.c_c = occ.value("c_c", 0.01);
      cfg.occam.c_cov = occ.value("c_cov", 0.001);
      cfg.occam.total_queries = cfg.budget;
      cfg.occam.seed = cfg.seed;

      const json dea = j.value("dea", json::object());
      cfg.dea.population = dea.value("population", 10ULL);
      cfg.dea.generations = dea.value("generations", 3000ULL);
      cfg.dea.differential_weight = dea.value("f", 0.5);
      cfg.dea.init_sigma = dea.value("init_sigma", 0.003);
      cfg.dea.bias_cap = dea.value("bias_cap", 0.2);
      cfg.dea.seed = cfg.seed;
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed config: ") + e.what());
  }

  require_file(cfg.original_path, "original audio");
  if (cfg.attack == AttackKind::NiOccam) {
    require_file(cfg.target_sequence_path, "target sequence");
  } else {
    require_file(cfg.initial_adversarial_path, "initial adversarial audio");
  }
  if (cfg.output_dir.empty()) throw ValidationError("output_dir missing from config");
  return cfg;
}

std::vector<int> load_target_sequence(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open target sequence " + path);
  std::vector<int> target;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      std::size_t pos = 0;
      const int value = std::stoi(line, &pos);
      while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
      if (pos != line.size()) throw ValidationError("");
      target.push_back(value);
    } catch (const std::exception&) {
      throw ValidationError("target sequence line is not an integer: " + line);
    }
  }
  if (target.empty()) throw ValidationError("target sequence is empty");
  return target;
}

void write_report(const AttackResult& result, const AudioVector& original,
                  const std::string& attack_name, std::uint64_t seed,
                  const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir);

  json summary;
  summary["attack"] = attack_name;
  summary["seed"] = seed;
  summary["queries"] = result.queries;
  summary["final_distance"] = result.final_distance;
  if (std::isnan(result.snr_db))
    summary["snr_db"] = nullptr;
  else
    summary["snr_db"] = result.snr_db;
  summary["success"] = result.success;
  {
    std::ofstream out(dir + "/result.json");
    if (!out) throw IoError("cannot write result.json");
    out << summary.dump(2) << "\n";
  }

  {
    std::ofstream out(dir + "/trace.csv");
    if (!out) throw IoError("cannot write trace.csv");
    out << "queries,best_distance,m,strategy,sigma\n";
    double previous = std::numeric_limits<double>::infinity();
    for (const TraceRow& row : result.trace) {
      if (row.best_distance > previous)
        throw Error("trace best_distance is not non-increasing");
      previous = row.best_distance;
      out << row.queries << ',' << format_double(row.best_distance) << ',' << row.group_count
          << ',' << row.strategy << ',' << format_double(row.sigma) << "\n";
    }
    if (!out) throw IoError("write failed for trace.csv");
  }

  write_wav(AudioVector(result.adversarial, original.sample_rate()),
            dir + "/adversarial.wav");
}

namespace {

int run_decision_attack(const ExperimentConfig& cfg) {
  const AudioVector original = read_wav(cfg.original_path);
  const AudioVector initial = read_wav(cfg.initial_adversarial_path);

  std::unique_ptr<Oracle> oracle = build_oracle(*cfg.oracle);
  AttackObjective objective(*oracle, *cfg.target, original.samples());

  AttackResult result;
  if (cfg.attack == AttackKind::Dea) {
    // generations x population can exceed the budget; the ledger caps it
    oracle->ledger().set_budget(cfg.budget);
    result = run_dea(cfg.dea, objective, original, initial);
  } else if (cfg.attack == AttackKind::Evolutionary) {
    result = run_evolutionary(cfg.occam, objective, original, initial);
  } else {
    result = run_occam(cfg.occam, objective, original, initial);
  }

  write_report(result, original, attack_kind_name(cfg.attack), cfg.seed, cfg.output_dir);
  log_info("attack finished: queries=" + std::to_string(result.queries) +
           " final_distance=" + format_double(result.final_distance));
  return result.success ? 0 : 3;
}

int run_inversion_attack(const ExperimentConfig& cfg) {
  const AudioVector original = read_wav(cfg.original_path);
  const std::vector<int> target = load_target_sequence(cfg.target_sequence_path);
  const ModelSpec& spec = *cfg.model;
  const ToySubstituteModel model = ToySubstituteModel::random(
      spec.frame_length, spec.classes, spec.seed, spec.weight_scale);

  if (original.size() % spec.frame_length != 0)
    throw ValidationError("original length is not a whole number of frames");
  if (target.size() != original.size() / spec.frame_length)
    throw ValidationError("target sequence length differs from frame count");

  const InversionRun run = run_ni_occam(cfg.inversion, model, original, target);

  // shape the run into the common report: the minimum-loss iterate is the
  // reported audio and the loss column plays the distance role
  AttackResult result;
  result.adversarial = run.iterates[run.best_index];
  result.sample_rate = original.sample_rate();
  result.final_distance = l2_distance(result.adversarial, original.samples());
  try {
    result.snr_db = snr_db(original.samples(), result.adversarial);
  } catch (const SnrUndefinedError&) {
    result.snr_db = std::numeric_limits<double>::quiet_NaN();
  }
  result.queries = 0;
  result.success = true;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < run.losses.size(); ++k) {
    best = std::min(best, run.losses[k]);
    result.trace.push_back({0, k + 1, best, 1, "ni-occam", run.sigmas[k]});
  }

  write_report(result, original, attack_kind_name(cfg.attack), cfg.seed, cfg.output_dir);
  log_info("inversion finished: best_loss=" + format_double(best));
  return 0;
}

}  // namespace

int run_experiment(const std::string& config_path) {
  try {
    const ExperimentConfig cfg = load_experiment_config(config_path);
    if (cfg.attack == AttackKind::NiOccam) return run_inversion_attack(cfg);
    return run_decision_attack(cfg);
  } catch (const BudgetError& e) {
    std::fprintf(stderr, "error[%s]: %s\n", e.code(), e.what());
    return 3;
  } catch (const Error& e) {
    std::fprintf(stderr, "error[%s]: %s\n", e.code(), e.what());
    return 2;
  }
}

}  // namespace occam
