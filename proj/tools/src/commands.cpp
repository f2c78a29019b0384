// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "lirelab/cli/commands.hpp"

#include <fstream>
#include <functional>
#include <string>

#include "lirelab/cli/experiment.hpp"
#include "lirelab/cli/pool_file.hpp"
#include "lirelab/errors.hpp"
#include "lirelab/report_io.hpp"

namespace lirelab::cli {

namespace fs = std::filesystem;

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body,
                Paths& written) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  body(out);
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
  written.push_back(path);
}

Policy load_compatible_policy(const ExperimentConfig& cfg, const fs::path& path) {
  Policy policy = load_policy(path.string());
  if (!policy.compatible_with(cfg.initial_policy())) {
    throw ConfigError(path.string() + ": policy shape does not match the config (V=" +
                      std::to_string(cfg.vocab.size) + ", L_max=" +
                      std::to_string(cfg.vocab.max_len) + ", Q=" +
                      std::to_string(cfg.query_classes) + ")");
  }
  return policy;
}

void write_frontier(const std::vector<FrontierRow>& rows, const fs::path& out, Paths& written) {
  write_file(out / "frontier.csv", [&](std::ostream& s) { write_frontier_csv(s, rows); }, written);
  write_file(out / "frontier.json", [&](std::ostream& s) { write_frontier_json(s, rows); }, written);
}

}  // namespace

Paths cmd_gen_data(const ExperimentConfig& cfg, const fs::path& out) {
  ensure_dir(out);
  const auto data = generate_dataset(cfg);
  Paths written;
  write_file(out / "train_pools.jsonl", [&](std::ostream& s) { write_pools(s, data.train); }, written);
  write_file(out / "eval_pools.jsonl", [&](std::ostream& s) { write_pools(s, data.eval); }, written);
  return written;
}

Paths cmd_score(const ExperimentConfig& cfg, const fs::path& pools, const fs::path& out) {
  ensure_dir(out);
  const auto input = load_pools(pools, cfg.vocab);
  std::vector<CandidatePool> scored;
  scored.reserve(input.size());
  for (const auto& pool : input) scored.push_back(score_pool(cfg.reward_model(), pool));

  std::string stem = pools.filename().string();
  for (const char* suffix : {".jsonl", ".scored"}) {
    const std::string s(suffix);
    if (stem.size() > s.size() && stem.compare(stem.size() - s.size(), s.size(), s) == 0) {
      stem.resize(stem.size() - s.size());
    }
  }
  Paths written;
  write_file(out / (stem + ".scored.jsonl"), [&](std::ostream& s) { write_pools(s, scored); },
             written);
  return written;
}

Paths cmd_train(const ExperimentConfig& cfg, const fs::path& pools, const fs::path& out) {
  ensure_dir(out);
  const auto input = load_pools(pools, cfg.vocab);
  if (input.empty()) throw DomainError(pools.string() + ": no pools to train on");
  for (const auto& pool : input) {
    for (const auto& r : pool.responses) {
      if (!r.reward) {
        throw ConfigError(pools.string() + ": query " + std::to_string(pool.query.id) +
                          " is not scored; run `lirelab score` first");
      }
    }
  }

  Paths written;
  CheckpointFn checkpoint;
  if (cfg.checkpoints) {
    ensure_dir(out / "checkpoints");
    checkpoint = [&](int e, int i, const Policy& policy) {
      const auto path =
          out / "checkpoints" / ("policy_e" + std::to_string(e) + "_i" + std::to_string(i) + ".json");
      save_policy(path.string(), policy);
      written.push_back(path);
    };
  }
  const auto result = train_policy(cfg, cfg.plan.train.method, input, checkpoint);
  write_file(out / "trace.csv", [&](std::ostream& s) { write_trace_csv(s, result.trace); }, written);
  save_policy((out / "policy.json").string(), result.policy);
  written.push_back(out / "policy.json");
  return written;
}

Paths cmd_eval(const ExperimentConfig& cfg, const fs::path& policy, const fs::path& eval_pools,
               const fs::path& out) {
  ensure_dir(out);
  const Policy trained = load_compatible_policy(cfg, policy);
  const auto pools = load_pools(eval_pools, cfg.vocab);
  const auto report = evaluate(trained, cfg.initial_policy(), pools, cfg.reward_model(),
                               cfg.held_out_reward_model(), eval_config(cfg));
  Paths written;
  write_file(out / "eval_summary.csv", [&](std::ostream& s) { write_eval_summary_csv(s, report); },
             written);
  write_file(out / "eval_rows.csv", [&](std::ostream& s) { write_eval_rows_csv(s, report); }, written);
  write_file(out / "eval.json", [&](std::ostream& s) { write_eval_json(s, report); }, written);
  write_frontier(frontier(cfg, trained, pools), out, written);
  return written;
}

Paths cmd_frontier(const ExperimentConfig& cfg, const fs::path& policy, const fs::path& eval_pools,
                   const fs::path& out) {
  ensure_dir(out);
  const Policy trained = load_compatible_policy(cfg, policy);
  const auto pools = load_pools(eval_pools, cfg.vocab);
  if (pools.empty()) throw DomainError(eval_pools.string() + ": no evaluation pools");
  Paths written;
  write_frontier(frontier(cfg, trained, pools), out, written);
  return written;
}

Paths cmd_compare(const ExperimentConfig& cfg, const fs::path& out) {
  ensure_dir(out);
  const auto results = compare_methods(cfg, generate_dataset(cfg));
  Paths written;
  write_file(
      out / "compare.csv",
      [&](std::ostream& s) {
        CsvWriter csv(s, "lirelab.compare", kReportSchemaVersion,
                      {"method", "mean_reward_rm", "mean_reward_rm_star", "win_rate_rm",
                       "win_rate_rm_star", "win_rate_avg", "negative_flip_rate", "kl",
                       "expected_reward_rm"});
        for (const auto& r : results) {
          csv.row({r.method, r.report.mean_reward_rm, r.report.mean_reward_rm_star,
                   r.report.win_rate_rm, r.report.win_rate_rm_star, r.report.win_rate,
                   r.report.negative_flip_rate, r.report.kl, r.expected_reward});
        }
      },
      written);
  return written;
}

Paths cmd_sweep_temp(const ExperimentConfig& cfg, const fs::path& out) {
  ensure_dir(out);
  const auto rows = sweep_temperatures(cfg, generate_dataset(cfg));
  Paths written;
  write_file(out / "sweep.csv", [&](std::ostream& s) { write_sweep_csv(s, rows); }, written);
  write_file(out / "sweep.json", [&](std::ostream& s) { write_sweep_json(s, rows); }, written);
  return written;
}

}  // namespace lirelab::cli
