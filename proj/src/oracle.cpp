#include "occam/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "occam/errors.hpp"
#include "occam/log.hpp"

namespace occam {

void QueryLedger::check() const {
  if (exhausted()) throw BudgetError("query budget exhausted");
}

Decision Oracle::query(std::span<const double> candidate) {
  ledger_.check();
  Decision d = decide(candidate);
  ledger_.charge();  // transport failures throw before this point
  return d;
}

namespace {

class HalfspaceOracle final : public Oracle {
 public:
  explicit HalfspaceOracle(HalfspaceSpec spec) : spec_(std::move(spec)) {}

 protected:
  Decision decide(std::span<const double> candidate) override {
    if (candidate.size() != spec_.weights.size())
      throw DimensionError("halfspace oracle dimension mismatch");
    double dot = spec_.offset;
    for (std::size_t i = 0; i < candidate.size(); ++i)
      dot += spec_.weights[i] * candidate[i];
    return {dot > 0.0 ? kTargetLabel : kBenignLabel};
  }

 private:
  HalfspaceSpec spec_;
};

class BallOracle final : public Oracle {
 public:
  explicit BallOracle(BallSpec spec) : spec_(std::move(spec)) {}

 protected:
  Decision decide(std::span<const double> candidate) override {
    if (candidate.size() != spec_.center.size())
      throw DimensionError("ball oracle dimension mismatch");
    double sq = 0.0;
    for (std::size_t i = 0; i < candidate.size(); ++i) {
      const double d = candidate[i] - spec_.center[i];
      sq += d * d;
    }
    return {std::sqrt(sq) <= spec_.radius ? kTargetLabel : kBenignLabel};
  }

 private:
  BallSpec spec_;
};

class TemplateOracle final : public Oracle {
 public:
  explicit TemplateOracle(TemplateSpec spec) : spec_(std::move(spec)) {}

 protected:
  Decision decide(std::span<const double> candidate) override {
    const std::string* best = nullptr;
    double best_sq = 0.0;
    // std::map iterates labels in lexicographic order, so keeping the
    // first strict minimum resolves distance ties toward the smallest
    // label.
    for (const auto& [label, centroid] : spec_.centroids) {
      if (candidate.size() != centroid.size())
        throw DimensionError("template oracle dimension mismatch");
      double sq = 0.0;
      for (std::size_t i = 0; i < candidate.size(); ++i) {
        const double d = candidate[i] - centroid[i];
        sq += d * d;
      }
      if (!best || sq < best_sq) {
        best = &label;
        best_sq = sq;
      }
    }
    return {*best};
  }

 private:
  TemplateSpec spec_;
};

struct ParsedUrl {
  std::string host_port;  // "http://host:port"
  std::string path;       // "/..." (default "/")
};

ParsedUrl parse_url(const std::string& url) {
  const std::string scheme = "http://";
  if (url.rfind(scheme, 0) != 0)
    throw ValidationError("remote oracle URL must start with http://");
  const std::size_t host_begin = scheme.size();
  if (host_begin == url.size()) throw ValidationError("remote oracle URL has no host");
  const std::size_t slash = url.find('/', host_begin);
  if (slash == std::string::npos) return {url, "/"};
  if (slash == host_begin) throw ValidationError("remote oracle URL has no host");
  return {url.substr(0, slash), url.substr(slash)};
}

std::string normalize_label(const std::string& label) {
  std::string out;
  out.reserve(label.size());
  for (unsigned char c : label) {
    if (std::isalnum(c) || std::isspace(c))
      out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

class RemoteOracle final : public Oracle {
 public:
  explicit RemoteOracle(RemoteSpec spec) : spec_(std::move(spec)), url_(parse_url(spec_.url)) {}

 protected:
  Decision decide(std::span<const double> candidate) override {
    std::vector<double> clamped(candidate.begin(), candidate.end());
    for (double& v : clamped) v = clamp_amplitude(v);
    const std::vector<std::uint8_t> wav =
        encode_wav(AudioVector(std::move(clamped), spec_.sample_rate));
    const std::string body(wav.begin(), wav.end());

    std::string last_failure = "no attempt made";
    for (int attempt = 0; attempt <= spec_.retries; ++attempt) {
      httplib::Client client(url_.host_port);
      client.set_connection_timeout(5, 0);
      client.set_read_timeout(30, 0);
      httplib::Headers headers;
      if (!spec_.bearer_token.empty())
        headers.emplace("Authorization", "Bearer " + spec_.bearer_token);

      auto res = client.Post(url_.path, headers, body, "audio/wav");
      if (!res) {
        last_failure = "connection failed: " + httplib::to_string(res.error());
        log_debug("remote oracle attempt failed: " + last_failure);
        continue;
      }
      if (res->status < 200 || res->status >= 300) {
        last_failure = "HTTP status " + std::to_string(res->status);
        log_debug("remote oracle attempt failed: " + last_failure);
        continue;
      }
      try {
        const auto json = nlohmann::json::parse(res->body);
        std::string label = json.at("decision").get<std::string>();
        if (spec_.normalize) label = normalize_label(label);
        if (label.empty()) {
          last_failure = "empty decision label";
          continue;
        }
        return {std::move(label)};
      } catch (const nlohmann::json::exception& e) {
        last_failure = std::string("bad response body: ") + e.what();
        log_debug("remote oracle attempt failed: " + last_failure);
      }
    }
    throw TransportError("remote oracle unreachable (" + last_failure + ")");
  }

 private:
  RemoteSpec spec_;
  ParsedUrl url_;
};

}  // namespace

std::unique_ptr<Oracle> build_oracle(const OracleSpec& spec) {
  if (const auto* hs = std::get_if<HalfspaceSpec>(&spec)) {
    if (hs->weights.empty()) throw ValidationError("halfspace weights must be non-empty");
    const bool all_zero = std::all_of(hs->weights.begin(), hs->weights.end(),
                                      [](double w) { return w == 0.0; });
    if (all_zero) throw ValidationError("halfspace weights are all zero: decision is constant");
    for (double w : hs->weights)
      if (!std::isfinite(w)) throw ValidationError("halfspace weight is not finite");
    if (!std::isfinite(hs->offset)) throw ValidationError("halfspace offset is not finite");
    return std::make_unique<HalfspaceOracle>(*hs);
  }
  if (const auto* ball = std::get_if<BallSpec>(&spec)) {
    if (ball->center.empty()) throw ValidationError("ball center must be non-empty");
    if (!(ball->radius >= 0.0)) throw ValidationError("ball radius must be non-negative");
    for (double c : ball->center)
      if (!std::isfinite(c)) throw ValidationError("ball center entry is not finite");
    return std::make_unique<BallOracle>(*ball);
  }
  if (const auto* tpl = std::get_if<TemplateSpec>(&spec)) {
    if (tpl->centroids.empty()) throw ValidationError("template needs at least one centroid");
    std::size_t dim = 0;
    for (const auto& [label, centroid] : tpl->centroids) {
      if (label.empty()) throw ValidationError("template label must be non-empty");
      if (centroid.empty()) throw ValidationError("template centroid must be non-empty");
      if (dim == 0) dim = centroid.size();
      if (centroid.size() != dim)
        throw ValidationError("template centroids have mismatched dimensions");
    }
    return std::make_unique<TemplateOracle>(*tpl);
  }
  const auto& remote = std::get<RemoteSpec>(spec);
  if (remote.url.empty()) throw ValidationError("remote oracle URL must be non-empty");
  parse_url(remote.url);  // validates
  if (remote.retries < 0) throw ValidationError("remote retries must be >= 0");
  if (remote.sample_rate <= 0) throw ValidationError("remote sample rate must be positive");
  return std::make_unique<RemoteOracle>(remote);
}

OracleSpec oracle_spec_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("oracle spec is not valid JSON: ") + e.what());
  }
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "halfspace") {
      HalfspaceSpec spec;
      spec.weights = j.at("weights").get<std::vector<double>>();
      spec.offset = j.value("offset", 0.0);
      return spec;
    }
    if (kind == "ball") {
      BallSpec spec;
      spec.center = j.at("center").get<std::vector<double>>();
      spec.radius = j.at("radius").get<double>();
      return spec;
    }
    if (kind == "template") {
      TemplateSpec spec;
      for (const auto& [label, centroid] : j.at("centroids").items())
        spec.centroids[label] = centroid.get<std::vector<double>>();
      return spec;
    }
    if (kind == "remote") {
      RemoteSpec spec;
      spec.url = j.at("url").get<std::string>();
      spec.normalize = j.value("normalize", false);
      spec.retries = j.value("retries", 2);
      spec.bearer_token = j.value("bearer_token", std::string());
      spec.sample_rate = j.value("sample_rate", 16000);
      return spec;
    }
    throw ValidationError("unknown oracle kind: " + kind);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed oracle spec: ") + e.what());
  }
}

OracleSpec load_oracle_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open oracle spec " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return oracle_spec_from_json(buf.str());
}

// --- mock server ---------------------------------------------------------

struct MockOracleServer::Impl {
  std::unique_ptr<Oracle> inner;
  httplib::Server server;
  std::thread worker;
  std::atomic<bool> running{false};

  explicit Impl(const OracleSpec& spec) : inner(build_oracle(spec)) {
    server.Post("/", [this](const httplib::Request& req, httplib::Response& res) {
      try {
        const auto* data = reinterpret_cast<const std::uint8_t*>(req.body.data());
        const AudioVector audio = decode_wav({data, req.body.size()});
        const Decision d = inner->query(audio);
        nlohmann::json out;
        out["decision"] = d.label;
        res.set_content(out.dump(), "application/json");
      } catch (const Error& e) {
        res.status = 400;
        res.set_content(std::string("{\"error\":\"") + e.code() + "\"}", "application/json");
      }
    });
  }
};

MockOracleServer::MockOracleServer(const OracleSpec& spec) : impl_(std::make_unique<Impl>(spec)) {}

MockOracleServer::~MockOracleServer() { stop(); }

int MockOracleServer::start(int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port("127.0.0.1");
    if (bound <= 0) throw IoError("mock oracle could not bind a port");
  } else {
    if (!impl_->server.bind_to_port("127.0.0.1", port))
      throw IoError("mock oracle could not bind port " + std::to_string(port));
  }
  impl_->running = true;
  impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  log_info("mock oracle listening on port " + std::to_string(bound));
  return bound;
}

void MockOracleServer::stop() {
  if (impl_ && impl_->running.exchange(false)) {
    impl_->server.stop();
    if (impl_->worker.joinable()) impl_->worker.join();
  }
}

void MockOracleServer::serve_blocking(int port) {
  log_info("mock oracle listening on port " + std::to_string(port));
  if (!impl_->server.listen("0.0.0.0", port))
    throw IoError("mock oracle could not listen on port " + std::to_string(port));
}

std::size_t MockOracleServer::request_count() const { return impl_->inner->ledger().count(); }

}  // namespace occam
