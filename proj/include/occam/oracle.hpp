#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "occam/audio.hpp"

namespace occam {

/// The only thing a decision-based attack ever sees.
struct Decision {
  std::string label;
};

/// Counts oracle calls and enforces an optional hard budget.
class QueryLedger {
 public:
  std::size_t count() const { return count_; }
  std::optional<std::size_t> budget() const { return budget_; }
  void set_budget(std::optional<std::size_t> budget) { budget_ = budget; }
  bool exhausted() const { return budget_ && count_ >= *budget_; }

  /// Throws BudgetError when the budget is already spent.
  void check() const;
  void charge() { ++count_; }

 private:
  std::size_t count_ = 0;
  std::optional<std::size_t> budget_;
};

// --- oracle specifications ---------------------------------------------

/// Decides "target" iff w.x + offset > 0.
struct HalfspaceSpec {
  std::vector<double> weights;
  double offset = 0.0;
};

/// Decides "target" iff ||x - center||_2 <= radius.
struct BallSpec {
  std::vector<double> center;
  double radius = 0.0;
};

/// Decides the label of the nearest centroid (ties: lexicographically
/// smallest label).
struct TemplateSpec {
  std::map<std::string, std::vector<double>> centroids;
};

/// HTTP decision service; see the wire protocol in the README.
struct RemoteSpec {
  std::string url;
  bool normalize = false;  // lowercase + strip punctuation on the reply
  int retries = 2;         // extra attempts after a transport failure
  std::string bearer_token;
  int sample_rate = 16000;  // rate stamped on the outgoing WAV
};

using OracleSpec = std::variant<HalfspaceSpec, BallSpec, TemplateSpec, RemoteSpec>;

inline constexpr const char* kTargetLabel = "target";
inline constexpr const char* kBenignLabel = "benign";

/// Black-box decision function with query accounting. Synthetic oracles
/// are pure; a transport failure on the remote oracle does not consume
/// budget.
class Oracle {
 public:
  virtual ~Oracle() = default;

  Decision query(std::span<const double> candidate);
  Decision query(const AudioVector& candidate) { return query(std::span<const double>(candidate.samples())); }

  QueryLedger& ledger() { return ledger_; }
  const QueryLedger& ledger() const { return ledger_; }

 protected:
  virtual Decision decide(std::span<const double> candidate) = 0;

 private:
  QueryLedger ledger_;
};

/// Validates the spec and builds the oracle. Throws ValidationError for
/// degenerate parameters (zero halfspace weights, negative radius, empty
/// template, unparseable URL).
std::unique_ptr<Oracle> build_oracle(const OracleSpec& spec);

/// Parses a JSON oracle description ({"kind": "ball", ...}); used by the
/// experiment config and the mock server CLI.
OracleSpec oracle_spec_from_json(const std::string& json_text);
OracleSpec load_oracle_spec(const std::string& path);

/// In-process HTTP server speaking the remote decision protocol, backed by
/// a synthetic oracle. Backs the remote-oracle integration tests and the
/// `mock-oracle serve` CLI command.
class MockOracleServer {
 public:
  explicit MockOracleServer(const OracleSpec& spec);
  ~MockOracleServer();

  MockOracleServer(const MockOracleServer&) = delete;
  MockOracleServer& operator=(const MockOracleServer&) = delete;

  /// Starts serving on a background thread. port = 0 picks a free port.
  /// Returns the bound port.
  int start(int port = 0);
  void stop();

  /// Serves on the calling thread until stop() (CLI entry point).
  void serve_blocking(int port);

  std::size_t request_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace occam
