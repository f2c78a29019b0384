// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "lirelab/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lirelab/errors.hpp"

namespace lirelab {

std::string_view to_string(OptimizerKind kind) {
  return kind == OptimizerKind::sgd ? "sgd" : "adam";
}

OptimizerKind parse_optimizer_kind(std::string_view text) {
  if (text == "sgd") return OptimizerKind::sgd;
  if (text == "adam") return OptimizerKind::adam;
  throw ConfigError("unknown optimizer '" + std::string(text) + "'");
}

void OptimizerConfig::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning_rate must be finite and nonnegative");
  }
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw ConfigError("adam betas must lie in [0, 1)");
  }
  if (!(epsilon > 0.0)) throw ConfigError("adam epsilon must be positive");
}

OptimizerState::OptimizerState(OptimizerConfig config) : config_(config) { config_.validate(); }

void OptimizerState::reset() {
  first_moment_.clear();
  second_moment_.clear();
  steps_ = 0;
}

void OptimizerState::step(std::span<double> params, std::span<const double> grad) {
  if (params.size() != grad.size()) throw ConfigError("optimizer: gradient shape mismatch");
  for (std::size_t i = 0; i < grad.size(); ++i) {
    if (!std::isfinite(grad[i])) {
      throw TrainingAborted("non-finite gradient entry " + std::to_string(i) + " at step " +
                            std::to_string(steps_ + 1));
    }
  }
  ++steps_;
  const double lr = config_.learning_rate;
  if (config_.kind == OptimizerKind::sgd) {
    for (std::size_t i = 0; i < params.size(); ++i) params[i] -= lr * grad[i];
    return;
  }

  if (first_moment_.size() != params.size()) {
    first_moment_.assign(params.size(), 0.0);
    second_moment_.assign(params.size(), 0.0);
  }
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    first_moment_[i] = b1 * first_moment_[i] + (1.0 - b1) * grad[i];
    second_moment_[i] = b2 * second_moment_[i] + (1.0 - b2) * grad[i] * grad[i];
    const double m_hat = first_moment_[i] / correction1;
    const double v_hat = second_moment_[i] / correction2;
    params[i] -= lr * m_hat / (std::sqrt(v_hat) + config_.epsilon);
  }
}

void apply_update(Policy& policy, const ParamTensor& grad, OptimizerState& state) {
  if (!grad.same_shape(policy.params())) throw ConfigError("apply_update: shape mismatch");
  state.step(policy.params().flat(), grad.flat());
}

}  // namespace lirelab
