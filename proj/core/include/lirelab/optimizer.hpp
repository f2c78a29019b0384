// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "lirelab/policy.hpp"
#include "lirelab/tensor.hpp"

namespace lirelab {

enum class OptimizerKind { sgd, adam };

std::string_view to_string(OptimizerKind kind);
OptimizerKind parse_optimizer_kind(std::string_view text);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::sgd;
  double learning_rate = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
};

/// SGD or Adam over a flat parameter vector. Adam moments are allocated on
/// the first step and sized to the parameters.
class OptimizerState {
 public:
  explicit OptimizerState(OptimizerConfig config = {});

  const OptimizerConfig& config() const noexcept { return config_; }
  std::uint64_t steps() const noexcept { return steps_; }

  /// params -= update(grad). Throws TrainingAborted on a non-finite gradient
  /// and leaves params untouched.
  void step(std::span<double> params, std::span<const double> grad);

  /// Clears the Adam moments and the step counter.
  void reset();

 private:
  OptimizerConfig config_;
  std::vector<double> first_moment_;
  std::vector<double> second_moment_;
  std::uint64_t steps_ = 0;
};

void apply_update(Policy& policy, const ParamTensor& grad, OptimizerState& state);

}  // namespace lirelab
