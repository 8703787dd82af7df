#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "helpers.hpp"
#include "occam/cc_driver.hpp"
#include "occam/errors.hpp"
#include "occam/oracle.hpp"
#include "occam/rng.hpp"

using namespace occam;
using occam::testing::make_ball_problem;

namespace {

bool rows_equal(const TraceRow& a, const TraceRow& b) {
  return a.queries == b.queries && a.sampled == b.sampled &&
         a.best_distance == b.best_distance && a.group_count == b.group_count &&
         a.strategy == b.strategy && a.sigma == b.sigma;
}

}  // namespace

TEST_SUITE("cc_driver") {

TEST_CASE("extract and embed gather and scatter in group order") {
  const std::vector<double> x = {0.1, 0.2, 0.3};
  std::vector<double> xstar = {0.4, 0.5, 0.6};
  std::vector<double> cov = {1.0, 2.0, 3.0};

  const std::vector<std::size_t> group = {2, 0};
  Subspace sub = extract_subspace(x, xstar, cov, group);
  CHECK(sub.x_sub == std::vector<double>{0.3, 0.1});
  CHECK(sub.xstar_sub == std::vector<double>{0.6, 0.4});
  CHECK(sub.cov_sub == std::vector<double>{3.0, 1.0});

  SUBCASE("embed of extracted values is the identity") {
    const std::vector<double> xstar_before = xstar;
    const std::vector<double> cov_before = cov;
    embed_subspace(xstar, cov, group, sub.xstar_sub, sub.cov_sub);
    CHECK(xstar == xstar_before);
    CHECK(cov == cov_before);
  }

  SUBCASE("embed touches only the group indices") {
    const std::vector<std::size_t> single = {1};
    const std::vector<double> new_val = {-0.9};
    const std::vector<double> new_cov = {9.0};
    embed_subspace(xstar, cov, single, new_val, new_cov);
    CHECK(xstar == std::vector<double>{0.4, -0.9, 0.6});
    CHECK(cov == std::vector<double>{1.0, 9.0, 3.0});
  }

  SUBCASE("full-index group extracts the full vectors") {
    const std::vector<std::size_t> all = {0, 1, 2};
    const Subspace full = extract_subspace(x, xstar, cov, all);
    CHECK(full.x_sub == x);
    CHECK(full.xstar_sub == xstar);
  }

  SUBCASE("errors") {
    const std::vector<std::size_t> bad = {5};
    CHECK_THROWS_AS(extract_subspace(x, xstar, cov, bad), ValidationError);
    const std::vector<std::size_t> ok = {0, 1};
    const std::vector<double> wrong_len = {0.0};
    CHECK_THROWS_AS(embed_subspace(xstar, cov, ok, wrong_len, wrong_len),
                    ValidationError);
  }
}

TEST_CASE("extract then embed round-trips on random instances") {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform_int(0, 48));
    std::vector<double> x(n), xstar(n), cov(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.uniform_real(-1.0, 1.0);
      xstar[i] = rng.uniform_real(-1.0, 1.0);
      cov[i] = rng.uniform_real(0.1, 2.0);
    }
    std::vector<std::size_t> group;
    for (std::size_t i = 0; i < n; ++i)
      if (rng.uniform() < 0.5) group.push_back(i);
    if (group.empty()) group.push_back(0);

    const std::vector<double> xstar_before = xstar;
    const std::vector<double> cov_before = cov;
    const Subspace sub = extract_subspace(x, xstar, cov, group);
    embed_subspace(xstar, cov, group, sub.xstar_sub, sub.cov_sub);
    CHECK(xstar == xstar_before);
    CHECK(cov == cov_before);
  }
}

TEST_CASE("embedded candidates evaluate like hand-built full vectors") {
  auto oracle = build_oracle(BallSpec{{0.2, 0.2, 0.2, 0.2}, 0.3});
  AttackObjective objective(*oracle, {AttackMode::Targeted, "target", ""},
                            {0.0, 0.0, 0.0, 0.0});
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> xstar = {0.2, 0.2, 0.2, 0.2};
    const std::vector<std::size_t> group = {3, 1};
    const std::vector<double> cand = {rng.uniform_real(-0.5, 0.5),
                                      rng.uniform_real(-0.5, 0.5)};

    std::vector<double> by_hand = xstar;
    by_hand[3] = cand[0];
    by_hand[1] = cand[1];

    std::vector<double> cov(4, 1.0);
    const std::vector<double> cov_sub = {1.0, 1.0};
    embed_subspace(xstar, cov, group, cand, cov_sub);
    const ObjectiveValue a = objective.evaluate(xstar);
    const ObjectiveValue b = objective.evaluate(by_hand);
    CHECK(a.adversarial == b.adversarial);
    CHECK(a.value == b.value);
  }
}

TEST_CASE("run_occam improves the incumbent on a ball problem") {
  auto problem = make_ball_problem(64, 7);
  AttackConfig config;
  config.total_queries = 2000;
  config.seed = 7;

  const double initial_distance =
      l2_distance(problem.initial.samples(), problem.original.samples());
  const AttackResult result =
      run_occam(config, *problem.objective, problem.original, problem.initial);

  CHECK(result.success);
  CHECK(result.final_distance < initial_distance);
  CHECK(result.final_distance >= problem.optimum - 1e-12);
  CHECK(result.final_distance < problem.optimum * 1.5);
  CHECK(problem.objective->evaluate(result.adversarial).adversarial);
}

TEST_CASE("invalid start points are rejected") {
  auto problem = make_ball_problem(16, 3);
  AttackConfig config;
  config.total_queries = 500;

  const AudioVector not_adversarial(std::vector<double>(16, -0.9), 16000);
  CHECK_THROWS_AS(
      run_occam(config, *problem.objective, problem.original, not_adversarial),
      InvalidStartError);
}

TEST_CASE("trace distances never increase and queries match the ledger") {
  auto problem = make_ball_problem(32, 11);
  AttackConfig config;
  config.total_queries = 1500;
  config.seed = 11;
  const AttackResult result =
      run_occam(config, *problem.objective, problem.original, problem.initial);

  REQUIRE(!result.trace.empty());
  double previous = std::numeric_limits<double>::infinity();
  for (const TraceRow& row : result.trace) {
    CHECK(row.best_distance <= previous);
    previous = row.best_distance;
  }
  CHECK(result.queries == problem.objective->query_count());
  CHECK(result.queries == problem.oracle->ledger().count());
}

TEST_CASE("query consumption stays within the documented slack") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    auto problem = make_ball_problem(32, seed);
    AttackConfig config;
    config.total_queries = 321;
    config.seed = seed;
    const AttackResult result =
        run_occam(config, *problem.objective, problem.original, problem.initial);
    CHECK(result.queries <= config.total_queries + config.offsprings_per_subspace +
                                config.binary_search_steps);
    CHECK(result.queries >= config.total_queries);
  }
}

TEST_CASE("identical seeds replay identically") {
  AttackConfig config;
  config.total_queries = 800;
  config.seed = 21;

  auto a = make_ball_problem(48, 5);
  const AttackResult ra = run_occam(config, *a.objective, a.original, a.initial);
  auto b = make_ball_problem(48, 5);
  const AttackResult rb = run_occam(config, *b.objective, b.original, b.initial);

  CHECK(ra.final_distance == rb.final_distance);
  CHECK(ra.queries == rb.queries);
  CHECK(ra.adversarial == rb.adversarial);
  REQUIRE(ra.trace.size() == rb.trace.size());
  for (std::size_t i = 0; i < ra.trace.size(); ++i)
    CHECK(rows_equal(ra.trace[i], rb.trace[i]));
}

TEST_CASE("ledger cap terminates normally with the incumbent") {
  auto problem = make_ball_problem(32, 9);
  problem.oracle->ledger().set_budget(200);
  AttackConfig config;
  config.total_queries = 100000;
  config.seed = 9;
  const AttackResult result =
      run_occam(config, *problem.objective, problem.original, problem.initial);
  CHECK(result.queries == 200);
  CHECK(result.success);
  CHECK(std::isfinite(result.final_distance));
}

TEST_CASE("config validation") {
  auto problem = make_ball_problem(8, 2);
  AttackConfig config;
  config.total_queries = 10;  // not above b = 15
  CHECK_THROWS_AS(run_occam(config, *problem.objective, problem.original, problem.initial),
                  ValidationError);

  config.total_queries = 100;
  config.offsprings_per_subspace = 0;
  CHECK_THROWS_AS(run_occam(config, *problem.objective, problem.original, problem.initial),
                  ValidationError);
}

}  // TEST_SUITE
