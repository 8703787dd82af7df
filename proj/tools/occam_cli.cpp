#include <cstdio>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "occam/audio.hpp"
#include "occam/errors.hpp"
#include "occam/experiment.hpp"
#include "occam/oracle.hpp"

namespace {

int print_metrics(const std::string& original_path, const std::string& adversarial_path) {
  const occam::AudioVector original = occam::read_wav(original_path);
  const occam::AudioVector adversarial = occam::read_wav(adversarial_path);

  nlohmann::json out;
  out["l2_distance"] = occam::l2_distance(original, adversarial);
  try {
    out["snr_db"] = occam::snr_db(original, adversarial);
  } catch (const occam::SnrUndefinedError&) {
    out["snr_db"] = nullptr;
  }
  std::printf("%s\n", out.dump(2).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decision-based audio adversarial attack toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  CLI::App* attack = app.add_subcommand("attack", "run an attack described by a JSON config");
  attack->add_option("config", config_path, "experiment config JSON")->required();

  CLI::App* mock = app.add_subcommand("mock-oracle", "synthetic decision oracle over HTTP");
  CLI::App* serve = mock->add_subcommand("serve", "serve the remote decision protocol");
  int port = 8080;
  std::string spec_path;
  serve->add_option("--port", port, "TCP port")->required();
  serve->add_option("--spec", spec_path, "oracle spec JSON file")->required();

  std::string orig_path, adv_path;
  CLI::App* metrics = app.add_subcommand("metrics", "distance and SNR of two WAV files");
  metrics->add_option("original", orig_path, "original WAV")->required();
  metrics->add_option("adversarial", adv_path, "perturbed WAV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*attack) return occam::run_experiment(config_path);
    if (*serve) {
      occam::MockOracleServer server(occam::load_oracle_spec(spec_path));
      server.serve_blocking(port);
      return 0;
    }
    if (*metrics) return print_metrics(orig_path, adv_path);
  } catch (const occam::Error& e) {
    std::fprintf(stderr, "error[%s]: %s\n", e.code(), e.what());
    return 2;
  }
  return 0;
}
