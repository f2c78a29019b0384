// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

#include "lirelab/policy.hpp"
#include "lirelab/tensor.hpp"

namespace lirelab {

using PolicyLoss = std::function<double(const Policy&)>;

/// Central differences, one pair of loss evaluations per parameter.
/// Verification only: O(#params) evaluations of `loss`.
ParamTensor finite_difference_grad(const PolicyLoss& loss, const Policy& policy,
                                   double step = 1e-5);

}  // namespace lirelab
