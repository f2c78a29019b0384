// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include <json.hpp>

#include "lirelab/errors.hpp"
#include "lirelab/evaluation.hpp"
#include "lirelab/report_io.hpp"
#include "test_support.hpp"

using namespace lirelab;
using namespace lirelab::testing;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("win_rate") {
  const std::vector<double> a = {2.0, 1.0, 1.0};
  const std::vector<double> b = {1.0, 2.0, 1.0};
  CHECK(win_rate(a, b) == 50.0);
  CHECK(win_rate(a, a) == 50.0);
  CHECK(win_rate(std::vector<double>{3.0, 4.0}, std::vector<double>{1.0, 2.0}) == 100.0);
  CHECK_THROWS_AS(win_rate(a, std::vector<double>{1.0}), DomainError);
  CHECK_THROWS_AS(win_rate(std::vector<double>{}, std::vector<double>{}), DomainError);

  SUBCASE("complementary and bounded on random rewards") {
    Rng rng = make_rng(8);
    for (int trial = 0; trial < 100; ++trial) {
      const auto n = static_cast<std::size_t>(uniform_int(rng, 1, 30));
      std::vector<double> x(n);
      std::vector<double> y(n);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = uniform_int(rng, 0, 3);
        y[i] = uniform_int(rng, 0, 3);
      }
      const double w = win_rate(x, y);
      CHECK(w >= 0.0);
      CHECK(w <= 100.0);
      CHECK(w + win_rate(y, x) == 100.0);
    }
  }
  SUBCASE("paired by query id") {
    const RewardModel rm(PredicateReward{PredicateKind::contains, 0});
    const std::vector<QueryResponse> p = {{Query{1, 0, {}}, Response{{0}, Source::model_sample, {}}}};
    const std::vector<QueryResponse> q = {{Query{2, 0, {}}, Response{{1}, Source::model_sample, {}}}};
    CHECK_THROWS_AS(win_rate(p, q, rm), DomainError);
    CHECK(win_rate(p, p, rm) == 50.0);
  }
}

TEST_CASE("negative_flip_rate") {
  const std::vector<double> before = {1.0, 2.0, 3.0, 4.0};
  CHECK(negative_flip_rate(before, before) == 0.0);
  CHECK(negative_flip_rate(before, std::vector<double>{0.0, 1.0, 2.0, 3.0}) == 100.0);
  CHECK(negative_flip_rate(before, std::vector<double>{0.0, 2.0, 5.0, 3.0}) == 50.0);
  CHECK_THROWS_AS(negative_flip_rate(before, std::vector<double>{1.0}), DomainError);
}

TEST_CASE("evaluate") {
  const Vocab vocab{4, 4};
  const Policy reference = Policy::random(vocab, 2, 1.0, 5);
  const RewardModel rm(PatternCountReward{{{0}, {1}}, 0.1, 3});
  const RewardModel rm_star = rm.perturbed(0.05, 1);
  std::vector<CandidatePool> pools;
  for (int i = 0; i < 10; ++i) {
    CandidatePool pool{Query{i, i % 2, {}}, {}};
    if (i % 3 == 0) pool.responses.push_back(Response{{0, 0, 3}, Source::human_chosen, {}});
    pools.push_back(pool);
  }

  SUBCASE("the reference against itself") {
    const auto report = evaluate(reference, reference, pools, rm, rm_star, EvalConfig{});
    CHECK(report.kl == 0.0);
    CHECK(report.negative_flip_rate == 0.0);
    CHECK(report.rows.size() == 10);
    CHECK(report.win_rate == 0.5 * (report.win_rate_rm + report.win_rate_rm_star));
    for (const auto& row : report.rows) CHECK(row.reward_rm == row.before_rm);
  }
  SUBCASE("a different policy") {
    const Policy policy = Policy::random(vocab, 2, 1.0, 6);
    const auto report = evaluate(policy, reference, pools, rm, rm_star, EvalConfig{});
    CHECK(report.kl > 0.0);
    CHECK(std::isfinite(report.kl));
    CHECK(report.win_rate_rm >= 0.0);
    CHECK(report.win_rate_rm <= 100.0);
    CHECK(report.rows[0].baseline_rm == rm.score(pools[0].query, pools[0].responses[0]));
  }
  CHECK_THROWS_AS(evaluate(reference, reference, std::vector<CandidatePool>{}, rm, rm_star,
                           EvalConfig{}),
                  DomainError);
}

TEST_CASE("reward_kl_frontier") {
  const Vocab vocab{4, 4};
  const Policy reference = Policy::random(vocab, 1, 1.0, 5);
  const Policy policy = Policy::random(vocab, 1, 1.0, 6);
  const RewardModel rm(PatternCountReward{{{0}}, 0.1, 3});
  std::vector<QueryResponse> baseline;
  for (int i = 0; i < 5; ++i) {
    baseline.push_back({Query{i, 0, {}}, Response{{1, 3}, Source::human_chosen, {}}});
  }
  const std::vector<double> temps = {0.5, 1.0, 2.0};
  const auto self = reward_kl_frontier(reference, reference, baseline, rm, temps, EvalConfig{});
  REQUIRE(self.size() == 3);
  for (const auto& row : self) CHECK(row.kl == 0.0);
  const auto rows = reward_kl_frontier(policy, reference, baseline, rm, temps, EvalConfig{});
  for (const auto& row : rows) CHECK(row.kl > 0.0);
  CHECK_THROWS_AS(reward_kl_frontier(policy, reference, baseline, rm,
                                     std::vector<double>{1.0, 0.0}, EvalConfig{}),
                  ConfigError);
}

TEST_CASE("temperature_sweep") {
  const std::vector<double> temps = {1, 2, 5, 10, 20};
  auto run = [](double t) { return SweepMetrics{1.0 / t, 50.0 + t}; };
  const auto a = temperature_sweep(run, temps);
  const auto b = temperature_sweep(run, temps);
  REQUIRE(a.size() == 5);
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(a[k].temperature == temps[k]);
    CHECK(a[k].mean_reward == b[k].mean_reward);
  }
  CHECK_THROWS_AS(temperature_sweep(run, std::vector<double>{-1.0}), ConfigError);
}

TEST_CASE("report writers") {
  EvalReport report;
  report.mean_reward_rm = 0.1;
  report.win_rate = 62.5;
  report.kl = std::numeric_limits<double>::infinity();
  report.rows.push_back(EvalRow{4, 1, 1.0, 0.5, 0.0, 0.0, 1.0});

  std::ostringstream summary;
  write_eval_summary_csv(summary, report);
  const auto summary_lines = lines(summary.str());
  REQUIRE(summary_lines.size() == 3);
  CHECK(summary_lines[0].rfind("# schema:", 0) == 0);

  std::ostringstream json;
  write_eval_json(json, report);
  const auto parsed = nlohmann::json::parse(json.str());
  CHECK(parsed["win_rate_avg"].get<double>() == 62.5);
  CHECK(parsed["kl"].is_null());
  CHECK(parsed["mean_reward_rm"].get<double>() == 0.1);

  const std::vector<FrontierRow> frontier = {{1.0, 0.2, 50.0, 0.3}, {2.0, 0.4, 40.0, 0.1}};
  std::ostringstream csv;
  write_frontier_csv(csv, frontier);
  CHECK(lines(csv.str()).size() == 2 + frontier.size());

  std::ostringstream bad;
  CsvWriter writer(bad, "x", 1, {"a", "b"});
  CHECK_THROWS_AS(writer.row({1.0}), Error);
}
