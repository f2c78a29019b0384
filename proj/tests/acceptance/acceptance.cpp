// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Tolerances are fixed here and nowhere else.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "lirelab/cli/config.hpp"
#include "lirelab/cli/experiment.hpp"
#include "lirelab/evaluation.hpp"
#include "lirelab/gradcheck.hpp"
#include "lirelab/objectives.hpp"
#include "lirelab/report_io.hpp"
#include "reference_losses.hpp"
#include "test_support.hpp"

#ifndef LIRELAB_CLI_PATH
#error "LIRELAB_CLI_PATH must name the lirelab executable"
#endif

namespace fs = std::filesystem;
using namespace lirelab;
using namespace lirelab::testing;

namespace {

constexpr double kGradTolerance = 1e-6;       // relative, vs central differences
constexpr double kFdStep = 1e-5;
constexpr int kGradInstances = 100;           // per objective
constexpr double kGradBudgetSeconds = 60.0;
constexpr int kZeroInstances = 50;            // per degenerate case
constexpr double kPairwiseTolerance = 1e-10;  // absolute
constexpr double kShiftTolerance = 1e-9;      // relative
constexpr double kWinRateFloor = 60.0;        // percent
constexpr double kTrainBudgetSeconds = 120.0;
constexpr double kSelfEnhanceSlack = 0.01;
const std::vector<std::uint64_t> kSeeds = {1, 2, 3};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double relative_difference(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// ---------------------------------------------------------------------------

Outcome gradient_conformance() {
  namespace ref = lirelab::reference;
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng = make_rng(20260101);
  struct Instance {
    ParamTensor analytic;
    ParamTensor numeric;         // extended-precision reference
    ParamTensor numeric_double;  // same differences of the library's own loss
  };
  struct Check {
    const char* name;
    std::function<Instance()> run;
  };
  const auto fd = [](const PolicyLoss& loss, const Policy& p) {
    return finite_difference_grad(loss, p, kFdStep);
  };
  const auto cd = [](const std::function<ref::Real(const ref::Table&)>& loss, const Policy& p) {
    return ref::central_differences(loss, p, kFdStep);
  };

  std::vector<Check> checks = {
      {"lire",
       [&] {
         auto inst = random_instance(rng);
         const auto m = static_cast<std::size_t>(uniform_int(rng, 2, 6));
         const auto pool = random_distinct_pool(inst.policy.vocab(), inst.query, m, rng);
         const ObjectiveConfig cfg{uniform_real(rng, 0.25, 10.0), 0.0, 0.1};
         return Instance{
             lire_loss(inst.policy, pool, cfg).grad,
             cd([&](const ref::Table& t) { return ref::lire(t, pool, cfg.temperature); },
                inst.policy),
             fd([&](const Policy& p) { return lire_loss(p, pool, cfg).value; }, inst.policy)};
       }},
      {"lire-2",
       [&] {
         auto inst = random_instance(rng);
         const auto pool = random_distinct_pool(inst.policy.vocab(), inst.query, 2, rng);
         const double t = uniform_real(rng, 0.25, 10.0);
         const ObjectiveConfig cfg{t, 0.0, 0.1};
         return Instance{
             lire2_grad(inst.policy, pool, t),
             cd([&](const ref::Table& tab) { return ref::lire(tab, pool, t); }, inst.policy),
             fd([&](const Policy& p) { return lire_loss(p, pool, cfg).value; }, inst.policy)};
       }},
      {"pg",
       [&] {
         auto inst = random_instance(rng);
         std::vector<RewardedSample> batch;
         const int m = uniform_int(rng, 1, 6);
         for (int i = 0; i < m; ++i) {
           batch.push_back({inst.query, random_response(inst.policy.vocab(), rng, 1),
                            uniform_real(rng, -2.0, 2.0)});
         }
         return Instance{pg_loss(inst.policy, batch).grad,
                         cd([&](const ref::Table& t) { return ref::pg(t, batch); }, inst.policy),
                         fd([&](const Policy& p) { return pg_loss(p, batch).value; }, inst.policy)};
       }},
      {"dpo",
       [&] {
         auto inst = random_instance(rng);
         const Policy reference =
             Policy::random(inst.policy.vocab(), inst.policy.query_classes(), 1.0, rng());
         const ref::Table reference_table(reference);
         const auto yw = random_response(inst.policy.vocab(), rng);
         auto yl = random_response(inst.policy.vocab(), rng);
         while (yl.tokens == yw.tokens) yl = random_response(inst.policy.vocab(), rng);
         const ObjectiveConfig cfg{1.0, 0.0, uniform_real(rng, 0.05, 2.0)};
         return Instance{
             dpo_loss(inst.policy, &reference, inst.query, yw, yl, cfg).grad,
             cd([&](const ref::Table& t) {
                  return ref::dpo(t, reference_table, inst.query, yw, yl, cfg.dpo_beta);
                },
                inst.policy),
             fd([&](const Policy& p) {
                  return dpo_loss(p, &reference, inst.query, yw, yl, cfg).value;
                },
                inst.policy)};
       }},
      {"sft",
       [&] {
         auto inst = random_instance(rng);
         std::vector<LabeledSample> batch;
         const int m = uniform_int(rng, 1, 6);
         for (int i = 0; i < m; ++i) {
           batch.push_back({inst.query, random_response(inst.policy.vocab(), rng, 1)});
         }
         return Instance{sft_loss(inst.policy, batch).grad,
                         cd([&](const ref::Table& t) { return ref::sft(t, batch); }, inst.policy),
                         fd([&](const Policy& p) { return sft_loss(p, batch).value; }, inst.policy)};
       }},
      {"combined",
       [&] {
         auto inst = random_instance(rng);
         const auto m = static_cast<std::size_t>(uniform_int(rng, 2, 6));
         const auto pool = random_distinct_pool(inst.policy.vocab(), inst.query, m, rng);
         const ObjectiveConfig cfg{uniform_real(rng, 0.25, 10.0), uniform_real(rng, 0.05, 2.0),
                                   0.1};
         const std::vector<LabeledSample> target = {
             {pool.query, pool.responses[select_sft_target(pool).value()]}};
         return Instance{
             combined_loss(inst.policy, pool, cfg).grad,
             cd([&](const ref::Table& t) {
                  return ref::lire(t, pool, cfg.temperature) +
                         static_cast<ref::Real>(cfg.sft_weight) * ref::sft(t, target);
                },
                inst.policy),
             fd([&](const Policy& p) { return combined_loss(p, pool, cfg).value; }, inst.policy)};
       }},
  };

  bool pass = true;
  std::string detail;
  int double_misses = 0;
  for (const auto& check : checks) {
    double worst = 0.0;
    for (int i = 0; i < kGradInstances; ++i) {
      const auto inst = check.run();
      worst = std::max(worst, relative_error(inst.analytic, inst.numeric));
      double_misses += relative_error(inst.analytic, inst.numeric_double) > kGradTolerance;
    }
    pass = pass && worst <= kGradTolerance;
    detail += fmt("%s %.1e; ", check.name, worst);
  }
  const double elapsed = seconds_since(t0);
  pass = pass && elapsed < kGradBudgetSeconds;
  detail += fmt("%d instances each, %.1fs (double-precision differences miss on %d of %d)",
                kGradInstances, elapsed, double_misses,
                kGradInstances * static_cast<int>(checks.size()));
  return {pass, detail};
}

Outcome structural_zeros() {
  Rng rng = make_rng(7);
  int zeros = 0;
  const ObjectiveConfig cfg{};
  for (int i = 0; i < kZeroInstances; ++i) {
    auto inst = random_instance(rng);
    const Vocab vocab = inst.policy.vocab();
    const ObjectiveConfig local{uniform_real(rng, 0.25, 10.0), 0.0, 0.1};

    // M = 1
    zeros += lire_loss(inst.policy, random_pool(vocab, inst.query, 1, rng), local).grad.is_zero();

    // identical responses, distinct rewards
    const auto y = random_response(vocab, rng);
    CandidatePool same{inst.query, {}};
    const int m = uniform_int(rng, 2, 6);
    for (int j = 0; j < m; ++j) {
      same.responses.push_back(Response{y.tokens, Source::model_sample, uniform_real(rng, -2, 2)});
    }
    zeros += lire_loss(inst.policy, make_scored_pool(same), local).grad.is_zero();

    // distinct responses, equal rewards
    auto flat = random_distinct_pool(vocab, inst.query, static_cast<std::size_t>(m), rng);
    const double r = uniform_real(rng, -2, 2);
    for (auto& resp : flat.responses) resp.reward = r;
    zeros += lire_loss(inst.policy, make_scored_pool(flat), cfg).grad.is_zero();
  }
  return {zeros == 3 * kZeroInstances,
          fmt("%d of %d gradients exactly zero (M=1, identical, equal rewards)", zeros,
              3 * kZeroInstances)};
}

Outcome pairwise_equivalence() {
  Rng rng = make_rng(9);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    auto inst = random_instance(rng);
    const auto pool = random_pool(inst.policy.vocab(), inst.query, 2, rng);
    const double t = uniform_real(rng, 0.25, 10.0);
    const auto list = lire_loss(inst.policy, pool, ObjectiveConfig{t, 0.0, 0.1}).grad;
    worst = std::max(worst, max_abs_difference(list, lire2_grad(inst.policy, pool, t)));
  }
  return {worst <= kPairwiseTolerance, fmt("max abs difference %.2e over 100 cases", worst)};
}

Outcome translation_invariance() {
  Rng rng = make_rng(11);
  double worst_value = 0.0;
  double worst_grad = 0.0;
  for (int i = 0; i < 100; ++i) {
    auto inst = random_instance(rng);
    const auto m = static_cast<std::size_t>(uniform_int(rng, 1, 6));
    const auto pool = random_pool(inst.policy.vocab(), inst.query, m, rng);
    const ObjectiveConfig cfg{uniform_real(rng, 0.25, 10.0), 0.0, 0.1};
    const auto base = lire_loss(inst.policy, pool, cfg);
    for (double c : {-100.0, 1.0, 1e6}) {
      CandidatePool shifted = pool;
      for (auto& r : shifted.responses) *r.reward += c;
      const auto moved = lire_loss(inst.policy, make_scored_pool(shifted), cfg);
      worst_value = std::max(worst_value, relative_difference(base.value, moved.value));
      worst_grad = std::max(worst_grad, relative_error(base.grad, moved.grad));
    }
  }
  return {worst_value <= kShiftTolerance && worst_grad <= kShiftTolerance,
          fmt("c in {-100, 1, 1e6}: value %.1e, grad %.1e relative", worst_value, worst_grad)};
}

// Expert-likelihood task of criteria 5 and 6.
cli::ExperimentConfig expert_task(std::uint64_t seed, std::size_t pool_size, int iterate_steps,
                                  std::size_t batch_size) {
  const std::string text = R"({
    "vocab": {"size": 4, "max_len": 5},
    "policy": {"query_classes": 2},
    "reward": {"rm": {"kind": "expert-likelihood"}},
    "data": {"train_queries": 200, "eval_queries": 64, "pool_size": )" +
                           std::to_string(pool_size) + R"(},
    "objective": {"temperature": 1.0},
    "optimizer": {"kind": "sgd", "learning_rate": 0.05},
    "train": {"evolve_steps": 1, "iterate_steps": )" +
                           std::to_string(iterate_steps) + R"(, "batch_size": )" +
                           std::to_string(batch_size) + R"(}
  })";
  return cli::parse_config(text, "expert task", seed);
}

cli::ExperimentConfig pattern_task(std::uint64_t seed) {
  return cli::parse_config(R"({
    "vocab": {"size": 4, "max_len": 5},
    "policy": {"query_classes": 2},
    "reward": {"rm": {"kind": "pattern-count", "targets": [[0, 1], [2]], "length_penalty": 0.1}},
    "data": {"train_queries": 64, "eval_queries": 32, "pool_size": 4}
  })",
                           "pattern task", seed);
}

struct TrainingImprovement {
  Outcome outcome;
  Policy initial;
  Policy trained;
  std::vector<Query> queries;
};

TrainingImprovement training_improvement() {
  const auto t0 = std::chrono::steady_clock::now();
  // 300 full-batch SGD steps over 200 pools of M = 4.
  const auto cfg = expert_task(1, 4, 300, 0);
  const auto data = cli::generate_dataset(cfg);
  const auto result = cli::train_policy(cfg, Method::lire, data.train);
  const Policy init = cfg.initial_policy();
  std::vector<Query> queries;
  for (const auto& p : data.train) queries.push_back(p.query);

  const double before = expected_reward_exact(init, queries, cfg.reward_model());
  const double after = expected_reward_exact(result.policy, queries, cfg.reward_model());
  const DecodeConfig greedy{DecodeMode::greedy, 1.0, 0, 0};
  Rng unused = make_rng(0);
  const auto trained = decode_all(result.policy, queries, greedy, unused);
  const auto baseline = decode_all(init, queries, greedy, unused);
  const double wins = win_rate(trained, baseline, cfg.reward_model());
  const double elapsed = seconds_since(t0);
  const std::size_t steps = result.trace.size();
  return {{after > before && wins >= kWinRateFloor && elapsed < kTrainBudgetSeconds && steps == 300,
           fmt("expected reward %.4f -> %.4f, greedy win rate %.2f%%, %zu steps, %.1fs", before,
               after, wins, steps, elapsed)},
          init,
          result.policy,
          queries};
}

Outcome multi_response_trend() {
  double m2 = 0.0;
  double m4 = 0.0;
  for (auto seed : kSeeds) {
    for (std::size_t m : {2u, 4u}) {
      const auto cfg = expert_task(seed, m, 30, 16);
      const auto r = cli::run_method(cfg, "lire", cli::generate_dataset(cfg));
      (m == 2 ? m2 : m4) += r.expected_reward / static_cast<double>(kSeeds.size());
    }
  }
  return {m4 >= m2, fmt("mean expected reward over 3 seeds: M=4 %.4f, M=2 %.4f", m4, m2)};
}

Outcome self_enhancement_trend() {
  bool pass = true;
  std::string detail;
  for (auto seed : kSeeds) {
    const auto base = pattern_task(seed);
    const auto data = cli::generate_dataset(base);
    const auto run = [&](int e, int i) {
      auto cfg = base;
      cfg.plan.evolve_steps = e;
      cfg.plan.iterate_steps = i;
      return cli::train_policy(cfg, Method::lire, data.train).trace.back().expected_reward;
    };
    const double r11 = run(1, 1);
    const double r33 = run(3, 3);
    pass = pass && r33 >= r11 - kSelfEnhanceSlack;
    detail += fmt("%sseed %llu: (1,1) %.4f (3,3) %.4f", detail.empty() ? "" : "; ", static_cast<unsigned long long>(seed), r11,
                  r33);
  }
  return {pass, detail};
}

Outcome temperature_behavior() {
  bool pass = true;
  std::string detail;
  for (auto seed : kSeeds) {
    const auto cfg = pattern_task(seed);
    const auto rows = cli::sweep_temperatures(cfg, cli::generate_dataset(cfg));
    const auto best = std::max_element(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
      return a.mean_reward < b.mean_reward;
    });
    pass = pass && best->temperature != 20.0 && rows.size() == 5;
    detail += fmt("%sseed %llu: best T=%g", detail.empty() ? "" : "; ", static_cast<unsigned long long>(seed),
                  best->temperature);
  }
  return {pass, detail};
}

Outcome kl_sanity(const TrainingImprovement& trained) {
  const double self = sequence_kl_exact(trained.initial, trained.initial, trained.queries);
  const double kl = sequence_kl_exact(trained.trained, trained.initial, trained.queries);

  const auto cfg = expert_task(1, 4, 300, 0);
  const auto data = cli::generate_dataset(cfg);
  const std::vector<double> temps = {0.5, 1.0, 2.0, 4.0};
  auto local = cfg;
  local.eval.frontier_temperatures = temps;
  const auto rows = cli::frontier(local, trained.trained, data.eval);
  std::ostringstream csv;
  write_frontier_csv(csv, rows);
  std::size_t data_rows = 0;
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);  // schema comment
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) data_rows += line.empty() ? 0 : 1;

  return {self == 0.0 && std::isfinite(kl) && kl > 0.0 && data_rows == temps.size(),
          fmt("KL(pi, pi) = %g, KL(trained || init) = %.4f, frontier rows %zu for %zu temperatures",
              self, kl, data_rows, temps.size())};
}

Outcome metric_algebra() {
  Rng rng = make_rng(13);
  int violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = static_cast<std::size_t>(uniform_int(rng, 1, 50));
    std::vector<double> a(n);
    std::vector<double> b(n);
    for (std::size_t i = 0; i < n; ++i) {
      // a coarse grid makes ties common
      a[i] = trial % 2 ? uniform_int(rng, 0, 3) : uniform_real(rng, -5, 5);
      b[i] = trial % 2 ? uniform_int(rng, 0, 3) : uniform_real(rng, -5, 5);
    }
    violations += win_rate(a, a) != 50.0;
    violations += win_rate(a, b) + win_rate(b, a) != 100.0;
    violations += negative_flip_rate(a, a) != 0.0;
  }
  return {violations == 0, fmt("%d violations over 1000 random reward sets", violations)};
}

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "lirelab_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  const fs::path config = root / "config.json";
  {
    std::ofstream out(config, std::ios::binary);
    out << R"({
      "seed": 5, "threads": 1,
      "vocab": {"size": 4, "max_len": 4},
      "policy": {"query_classes": 2},
      "reward": {"rm": {"kind": "pattern-count", "targets": [[0, 1], [2]], "length_penalty": 0.1}},
      "data": {"train_queries": 24, "eval_queries": 12, "pool_size": 3},
      "train": {"evolve_steps": 2, "iterate_steps": 2, "checkpoints": true},
      "eval": {"sweep_temperatures": [1, 5], "kl_samples": 200}
    })";
  }
  const std::string cli = LIRELAB_CLI_PATH;
  const std::vector<std::string> commands = {
      "gen-data",
      "score --pools {out}/train_pools.jsonl",
      "train",
      "eval",
      "frontier",
      "compare",
      "sweep-temp",
  };
  for (const char* run : {"a", "b"}) {
    const fs::path out = root / run;
    for (auto command : commands) {
      const auto at = command.find("{out}");
      if (at != std::string::npos) command.replace(at, 5, out.string());
      const std::string line = "\"" + cli + "\" " + command + " --config \"" + config.string() +
                               "\" --out \"" + out.string() + "\" --threads 1 > \"" +
                               (root / "log.txt").string() + "\" 2>&1";
      if (std::system(line.c_str()) != 0) {
        return {false, "command failed: lirelab " + command};
      }
    }
  }

  std::size_t files = 0;
  std::size_t mismatched = 0;
  for (const auto& entry : fs::recursive_directory_iterator(root / "a")) {
    if (!entry.is_regular_file()) continue;
    ++files;
    const auto twin = root / "b" / fs::relative(entry.path(), root / "a");
    if (!fs::exists(twin) || read_bytes(entry.path()) != read_bytes(twin)) ++mismatched;
  }
  fs::remove_all(root);
  return {files > 0 && mismatched == 0,
          fmt("%zu output files from 7 commands, %zu differ between reruns", files, mismatched)};
}

}  // namespace

int main() {
  int failures = 0;
  const auto report = [&](int id, const char* name, const Outcome& o) {
    std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  };

  report(1, "gradient conformance", gradient_conformance());
  report(2, "structural zeros", structural_zeros());
  report(3, "pairwise equivalence", pairwise_equivalence());
  report(4, "translation invariance", translation_invariance());
  const auto trained = training_improvement();
  report(5, "training improvement", trained.outcome);
  report(6, "multi-response trend", multi_response_trend());
  report(7, "self-enhancement trend", self_enhancement_trend());
  report(8, "temperature behavior", temperature_behavior());
  report(9, "KL sanity", kl_sanity(trained));
  report(10, "metric algebra", metric_algebra());
  report(11, "determinism", determinism());

  std::printf("%d of 11 criteria passed\n", 11 - failures);
  return failures == 0 ? 0 : 1;
}
