// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lirelab/policy.hpp"
#include "lirelab/rewards.hpp"
#include "lirelab/training.hpp"

namespace lirelab::cli {

struct DataSpec {
  std::size_t train_queries = 64;
  std::size_t eval_queries = 32;
  std::size_t pool_size = 2;  // M
  /// With anchors every pool starts with a human-chosen and a human-rejected
  /// entry; the rest are samples from the initial policy.
  bool anchors = true;
  std::size_t anchor_samples = 8;  // draws per anchor, best/worst kept
  std::uint64_t expert_seed = 0;
  double expert_scale = 2.0;
};

struct EvalSpec {
  std::vector<double> frontier_temperatures = {0.5, 1.0, 2.0};
  std::vector<double> sweep_temperatures = {1.0, 2.0, 5.0, 10.0, 20.0};
  std::size_t best_of_n = 4;
  std::size_t kl_samples = 2000;
  KlMode kl_mode = KlMode::automatic;
};

struct ExperimentConfig {
  Vocab vocab{4, 5};
  int query_classes = 2;
  std::uint64_t init_seed = 0;
  double init_scale = 0.5;

  std::optional<RewardModel> rm;
  std::optional<RewardModel> rm_star;

  DataSpec data;
  TrainPlan plan;
  EvalSpec eval;
  std::vector<std::string> compare_methods = {"lire", "pg", "dpo", "sft", "best_of_n"};
  bool checkpoints = false;

  std::uint64_t seed = 0;
  std::filesystem::path out_dir = "out";

  /// Policy::random(vocab, query_classes, init_scale, init_seed).
  Policy initial_policy() const;
  /// The policy that writes human-chosen anchors: RM's expert for an
  /// expert-likelihood RM, otherwise a random policy from expert_seed/scale.
  Policy anchor_expert() const;
  const RewardModel& reward_model() const;
  const RewardModel& held_out_reward_model() const;
};

/// Seed for an independent stream derived from the global seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Parses JSON (comments allowed). Missing keys take the defaults above;
/// unknown keys are rejected so typos do not pass silently. Seeds that are
/// not given explicitly are derived from "seed", which `seed_override`
/// replaces when set. `source` names the input in error messages.
ExperimentConfig parse_config(std::string_view text, std::string_view source = "<config>",
                              std::optional<std::uint64_t> seed_override = std::nullopt);
ExperimentConfig load_config(const std::filesystem::path& path,
                             std::optional<std::uint64_t> seed_override = std::nullopt);

}  // namespace lirelab::cli
