// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "lirelab/gradcheck.hpp"

#include <cmath>

#include "lirelab/errors.hpp"

namespace lirelab {

ParamTensor finite_difference_grad(const PolicyLoss& loss, const Policy& policy, double step) {
  if (!(step > 0.0)) throw ConfigError("finite_difference_grad: step must be positive");
  Policy probe = policy;
  ParamTensor grad(policy.query_classes(), policy.vocab().size);
  auto theta = probe.params().flat();
  auto out = grad.flat();
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double saved = theta[i];
    theta[i] = saved + step;
    const double up = loss(probe);
    theta[i] = saved - step;
    const double down = loss(probe);
    theta[i] = saved;
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw OracleFailure("non-finite loss at perturbed parameter " + std::to_string(i));
    }
    out[i] = (up - down) / (2.0 * step);
  }
  return grad;
}

}  // namespace lirelab
