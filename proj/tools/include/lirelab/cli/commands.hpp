// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "lirelab/cli/config.hpp"

namespace lirelab::cli {

using Paths = std::vector<std::filesystem::path>;

/// Each command writes into `out` (created if missing) and returns the files
/// it wrote. Outputs contain no timestamps, so reruns are byte-identical.

/// train_pools.jsonl and eval_pools.jsonl, unscored.
Paths cmd_gen_data(const ExperimentConfig& cfg, const std::filesystem::path& out);

/// <stem>.scored.jsonl with every raw reward filled by RM.
Paths cmd_score(const ExperimentConfig& cfg, const std::filesystem::path& pools,
                const std::filesystem::path& out);

/// trace.csv (one row per Evolve/Iterate cell), policy.json and, when
/// train.checkpoints is set, checkpoints/policy_e<E>_i<I>.json.
Paths cmd_train(const ExperimentConfig& cfg, const std::filesystem::path& pools,
                const std::filesystem::path& out);

/// eval_summary.csv, eval_rows.csv, eval.json, frontier.csv, frontier.json.
Paths cmd_eval(const ExperimentConfig& cfg, const std::filesystem::path& policy,
               const std::filesystem::path& eval_pools, const std::filesystem::path& out);

/// frontier.csv and frontier.json.
Paths cmd_frontier(const ExperimentConfig& cfg, const std::filesystem::path& policy,
                   const std::filesystem::path& eval_pools, const std::filesystem::path& out);

/// compare.csv, one row per configured method, on freshly generated data.
Paths cmd_compare(const ExperimentConfig& cfg, const std::filesystem::path& out);

/// sweep.csv and sweep.json over eval.sweep_temperatures.
Paths cmd_sweep_temp(const ExperimentConfig& cfg, const std::filesystem::path& out);

}  // namespace lirelab::cli
