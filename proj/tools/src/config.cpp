// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "lirelab/cli/config.hpp"

#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lirelab/errors.hpp"

namespace lirelab::cli {

using nlohmann::json;

namespace {

// Stream ids for seeds derived from the global seed.
constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kExpertStream = 2;
constexpr std::uint64_t kRmExpertStream = 3;
constexpr std::uint64_t kRmStarStream = 4;
constexpr std::uint64_t kTrainStream = 5;
constexpr std::uint64_t kSamplingStream = 6;

// Reads the members of one JSON object and reports the ones nobody asked for.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail("must be an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return node_.contains(key) && !node_.at(key).is_null();
  }

  template <typename T>
  T get(const std::string& key, T fallback) {
    if (!has(key)) return fallback;
    return as<T>(key);
  }

  template <typename T>
  T require(const std::string& key) {
    if (!has(key)) fail("missing required key '" + key + "'");
    return as<T>(key);
  }

  const json& raw(const std::string& key) {
    if (!has(key)) fail("missing required key '" + key + "'");
    return node_.at(key);
  }

  std::string path(const std::string& key) const { return path_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.count(key)) fail("unknown key '" + key + "'");
    }
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ConfigError(path_ + ": " + message);
  }

 private:
  template <typename T>
  T as(const std::string& key) {
    try {
      return node_.at(key).get<T>();
    } catch (const json::exception&) {
      fail("key '" + key + "' has the wrong type");
    }
  }

  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

struct Context {
  std::uint64_t seed;
  Vocab vocab;
  int query_classes;
};

RewardModel parse_reward(Section s, const Context& ctx, std::uint64_t expert_stream) {
  const auto kind = s.require<std::string>("kind");
  RewardModel::Spec spec;
  if (kind == "pattern-count") {
    PatternCountReward p;
    p.targets = s.require<std::vector<TokenSequence>>("targets");
    p.length_penalty = s.get<double>("length_penalty", 0.0);
    p.eos = ctx.vocab.eos();
    for (const auto& t : p.targets) {
      for (Token tok : t) {
        if (tok < 0 || tok >= ctx.vocab.size) s.fail("target token out of range");
      }
    }
    spec = p;
  } else if (kind == "expert-likelihood") {
    std::shared_ptr<const Policy> expert;
    if (s.has("expert_file")) {
      Policy loaded = load_policy(s.require<std::string>("expert_file"));
      if (!(loaded.vocab().size == ctx.vocab.size && loaded.vocab().max_len == ctx.vocab.max_len &&
            loaded.query_classes() == ctx.query_classes)) {
        s.fail("expert_file does not match the configured vocab and query classes");
      }
      expert = std::make_shared<const Policy>(std::move(loaded));
    } else {
      const auto seed = s.get<std::uint64_t>("expert_seed", derive_seed(ctx.seed, expert_stream));
      const double scale = s.get<double>("expert_scale", 2.0);
      expert = std::make_shared<const Policy>(
          Policy::random(ctx.vocab, ctx.query_classes, scale, seed));
    }
    spec = ExpertLikelihoodReward{expert};
  } else if (kind == "predicate") {
    PredicateReward p;
    p.kind = parse_predicate_kind(s.require<std::string>("predicate"));
    p.token = s.require<Token>("token");
    if (p.token < 0 || p.token >= ctx.vocab.size) s.fail("predicate token out of range");
    spec = p;
  } else {
    s.fail("unknown reward kind '" + kind +
           "' (expected pattern-count, expert-likelihood or predicate)");
  }
  s.finish();
  return RewardModel(std::move(spec));
}

KlMode parse_kl_mode(const std::string& text, const Section& s) {
  if (text == "exact") return KlMode::exact;
  if (text == "monte-carlo") return KlMode::monte_carlo;
  if (text == "automatic") return KlMode::automatic;
  s.fail("unknown kl_mode '" + text + "'");
}

void check_temperatures(const std::vector<double>& temps, const Section& s, const char* key) {
  for (double t : temps) {
    if (!(t > 0.0)) s.fail(std::string(key) + " must be positive");
  }
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  Rng rng = make_rng(seed, stream);
  return rng();
}

Policy ExperimentConfig::initial_policy() const {
  return Policy::random(vocab, query_classes, init_scale, init_seed);
}

Policy ExperimentConfig::anchor_expert() const {
  if (const auto* e = std::get_if<ExpertLikelihoodReward>(&reward_model().spec())) {
    return *e->expert;
  }
  return Policy::random(vocab, query_classes, data.expert_scale, data.expert_seed);
}

const RewardModel& ExperimentConfig::reward_model() const {
  if (!rm) throw ConfigError("no reward model configured");
  return *rm;
}

const RewardModel& ExperimentConfig::held_out_reward_model() const {
  if (!rm_star) throw ConfigError("no held-out reward model configured");
  return *rm_star;
}

ExperimentConfig parse_config(std::string_view text, std::string_view source,
                              std::optional<std::uint64_t> seed_override) {
  json doc;
  try {
    doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  }

  ExperimentConfig cfg;
  Section root(doc, std::string(source));
  cfg.seed = root.get<std::uint64_t>("seed", 0);
  if (seed_override) cfg.seed = *seed_override;
  cfg.out_dir = root.get<std::string>("out", "out");

  if (root.has("vocab")) {
    Section s(root.raw("vocab"), root.path("vocab"));
    cfg.vocab.size = s.get<int>("size", cfg.vocab.size);
    cfg.vocab.max_len = s.get<int>("max_len", cfg.vocab.max_len);
    s.finish();
  }
  cfg.vocab.validate();

  cfg.init_seed = derive_seed(cfg.seed, kInitStream);
  if (root.has("policy")) {
    Section s(root.raw("policy"), root.path("policy"));
    cfg.query_classes = s.get<int>("query_classes", cfg.query_classes);
    cfg.init_seed = s.get<std::uint64_t>("init_seed", cfg.init_seed);
    cfg.init_scale = s.get<double>("init_scale", cfg.init_scale);
    s.finish();
  }
  if (cfg.query_classes < 1) throw ConfigError(root.path("policy") + ": query_classes must be >= 1");
  if (!(cfg.init_scale >= 0.0)) throw ConfigError(root.path("policy") + ": init_scale must be >= 0");

  const Context ctx{cfg.seed, cfg.vocab, cfg.query_classes};
  {
    Section s(root.raw("reward"), root.path("reward"));
    cfg.rm = parse_reward(Section(s.raw("rm"), s.path("rm")), ctx, kRmExpertStream);
    double perturb = 0.1;
    std::uint64_t perturb_seed = derive_seed(cfg.seed, kRmStarStream);
    if (s.has("rm_star")) {
      const json& node = s.raw("rm_star");
      if (node.is_object() && node.contains("kind")) {
        cfg.rm_star = parse_reward(Section(node, s.path("rm_star")), ctx, kRmStarStream);
      } else {
        Section p(node, s.path("rm_star"));
        perturb = p.get<double>("perturb", perturb);
        perturb_seed = p.get<std::uint64_t>("seed", perturb_seed);
        p.finish();
      }
    }
    if (!cfg.rm_star) cfg.rm_star = cfg.rm->perturbed(perturb, perturb_seed);
    s.finish();
  }

  cfg.data.expert_seed = derive_seed(cfg.seed, kExpertStream);
  if (root.has("data")) {
    Section s(root.raw("data"), root.path("data"));
    cfg.data.train_queries = s.get<std::size_t>("train_queries", cfg.data.train_queries);
    cfg.data.eval_queries = s.get<std::size_t>("eval_queries", cfg.data.eval_queries);
    cfg.data.pool_size = s.get<std::size_t>("pool_size", cfg.data.pool_size);
    cfg.data.anchors = s.get<bool>("anchors", cfg.data.anchors);
    cfg.data.anchor_samples = s.get<std::size_t>("anchor_samples", cfg.data.anchor_samples);
    cfg.data.expert_seed = s.get<std::uint64_t>("expert_seed", cfg.data.expert_seed);
    cfg.data.expert_scale = s.get<double>("expert_scale", cfg.data.expert_scale);
    if (cfg.data.train_queries == 0) s.fail("train_queries must be >= 1");
    if (cfg.data.eval_queries == 0) s.fail("eval_queries must be >= 1");
    if (cfg.data.pool_size == 0) s.fail("pool_size must be >= 1");
    if (cfg.data.anchor_samples == 0) s.fail("anchor_samples must be >= 1");
    s.finish();
  }

  auto& plan = cfg.plan;
  plan.pool_size = cfg.data.pool_size;
  plan.train.seed = derive_seed(cfg.seed, kTrainStream);
  plan.sampling.seed = derive_seed(cfg.seed, kSamplingStream);
  if (root.has("objective")) {
    Section s(root.raw("objective"), root.path("objective"));
    plan.train.objective.temperature = s.get<double>("temperature", 1.0);
    plan.train.objective.sft_weight = s.get<double>("sft_weight", 0.0);
    plan.train.objective.dpo_beta = s.get<double>("dpo_beta", 0.1);
    s.finish();
  }
  if (root.has("optimizer")) {
    Section s(root.raw("optimizer"), root.path("optimizer"));
    auto& o = plan.train.optimizer;
    o.kind = parse_optimizer_kind(s.get<std::string>("kind", "sgd"));
    o.learning_rate = s.get<double>("learning_rate", o.learning_rate);
    o.beta1 = s.get<double>("beta1", o.beta1);
    o.beta2 = s.get<double>("beta2", o.beta2);
    o.epsilon = s.get<double>("epsilon", o.epsilon);
    s.finish();
  }
  if (root.has("train")) {
    Section s(root.raw("train"), root.path("train"));
    plan.train.method = parse_method(s.get<std::string>("method", "lire"));
    plan.evolve_steps = s.get<int>("evolve_steps", plan.evolve_steps);
    plan.iterate_steps = s.get<int>("iterate_steps", plan.iterate_steps);
    plan.train.batch_size = s.get<std::size_t>("batch_size", plan.train.batch_size);
    plan.train.seed = s.get<std::uint64_t>("seed", plan.train.seed);
    plan.sampling.sampling_temperature = s.get<double>("sampling_temperature", 1.0);
    plan.sampling.seed = s.get<std::uint64_t>("sampling_seed", plan.sampling.seed);
    plan.eval_samples = s.get<std::size_t>("reward_samples", plan.eval_samples);
    cfg.checkpoints = s.get<bool>("checkpoints", false);
    if (!(plan.sampling.sampling_temperature > 0.0)) s.fail("sampling_temperature must be positive");
    s.finish();
  }
  plan.train.threads = root.get<int>("threads", 1);
  plan.validate();

  if (root.has("eval")) {
    Section s(root.raw("eval"), root.path("eval"));
    auto& e = cfg.eval;
    e.frontier_temperatures = s.get<std::vector<double>>("frontier_temperatures", e.frontier_temperatures);
    e.sweep_temperatures = s.get<std::vector<double>>("sweep_temperatures", e.sweep_temperatures);
    e.best_of_n = s.get<std::size_t>("best_of_n", e.best_of_n);
    e.kl_samples = s.get<std::size_t>("kl_samples", e.kl_samples);
    e.kl_mode = parse_kl_mode(s.get<std::string>("kl_mode", "automatic"), s);
    check_temperatures(e.frontier_temperatures, s, "frontier_temperatures");
    check_temperatures(e.sweep_temperatures, s, "sweep_temperatures");
    if (e.best_of_n == 0) s.fail("best_of_n must be >= 1");
    if (e.kl_samples == 0) s.fail("kl_samples must be >= 1");
    s.finish();
  }

  if (root.has("compare")) {
    Section s(root.raw("compare"), root.path("compare"));
    cfg.compare_methods = s.get<std::vector<std::string>>("methods", cfg.compare_methods);
    for (const auto& m : cfg.compare_methods) {
      if (m != "best_of_n") parse_method(m);
    }
    if (cfg.compare_methods.size() < 2) s.fail("methods must list at least two methods");
    s.finish();
  }

  root.finish();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path,
                             std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.string(), seed_override);
}

}  // namespace lirelab::cli
