// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

// lirelab: generate pools, score, train, evaluate and compare on the
// synthetic sequence tasks.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lirelab/cli/commands.hpp"
#include "lirelab/cli/config.hpp"
#include "lirelab/errors.hpp"

namespace fs = std::filesystem;
using namespace lirelab;
using namespace lirelab::cli;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> threads;
  std::optional<std::string> pools;
  std::optional<std::string> policy;
};

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config, "Experiment config (JSON, comments allowed)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", opt.seed, "Override the config's global seed");
  cmd->add_option("--out", opt.out, "Output directory (default: the config's \"out\")");
  cmd->add_option("--threads", opt.threads, "Gradient workers; 1 is the bit-exact mode")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Listwise reward-enhanced policy optimization on synthetic sequence tasks"};
  app.require_subcommand(1);
  Options opt;

  auto* gen = app.add_subcommand("gen-data", "Write train_pools.jsonl and eval_pools.jsonl");
  auto* score = app.add_subcommand("score", "Fill raw rewards of a pool file with RM");
  auto* train = app.add_subcommand("train", "Run the Evolve/Iterate loop on a scored pool file");
  auto* eval = app.add_subcommand("eval", "Evaluate a policy: RM/RM* report and frontier");
  auto* compare = app.add_subcommand("compare", "Train every configured method, one CSV row each");
  auto* frontier = app.add_subcommand("frontier", "Reward-KL frontier over sampling temperatures");
  auto* sweep = app.add_subcommand("sweep-temp", "Train LIRE once per objective temperature T");
  for (auto* cmd : {gen, score, train, eval, compare, frontier, sweep}) add_common(cmd, opt);

  score->add_option("--pools", opt.pools, "Pool file to score")->required();
  train->add_option("--pools", opt.pools, "Scored pool file (default: <out>/train_pools.scored.jsonl)");
  for (auto* cmd : {eval, frontier}) {
    cmd->add_option("--policy", opt.policy, "Policy file (default: <out>/policy.json)");
    cmd->add_option("--pools", opt.pools, "Evaluation pools (default: <out>/eval_pools.jsonl)");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg = load_config(opt.config, opt.seed);
    if (opt.threads) cfg.plan.train.threads = *opt.threads;
    const fs::path out = opt.out ? fs::path(*opt.out) : cfg.out_dir;
    const auto pools_or = [&](const char* fallback) {
      return opt.pools ? fs::path(*opt.pools) : out / fallback;
    };
    const fs::path policy = opt.policy ? fs::path(*opt.policy) : out / "policy.json";

    Paths written;
    if (gen->parsed()) {
      written = cmd_gen_data(cfg, out);
    } else if (score->parsed()) {
      written = cmd_score(cfg, *opt.pools, out);
    } else if (train->parsed()) {
      written = cmd_train(cfg, pools_or("train_pools.scored.jsonl"), out);
    } else if (eval->parsed()) {
      written = cmd_eval(cfg, policy, pools_or("eval_pools.jsonl"), out);
    } else if (frontier->parsed()) {
      written = cmd_frontier(cfg, policy, pools_or("eval_pools.jsonl"), out);
    } else if (compare->parsed()) {
      written = cmd_compare(cfg, out);
    } else if (sweep->parsed()) {
      written = cmd_sweep_temp(cfg, out);
    }
    for (const auto& p : written) std::cout << "wrote " << p.string() << '\n';
    return 0;
  } catch (const ParseError& e) {
    std::cerr << "lirelab: parse error: " << e.what() << '\n';
  } catch (const ConfigError& e) {
    std::cerr << "lirelab: config error: " << e.what() << '\n';
  } catch (const Error& e) {
    std::cerr << "lirelab: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "lirelab: unexpected error: " << e.what() << '\n';
  }
  return 1;
}
