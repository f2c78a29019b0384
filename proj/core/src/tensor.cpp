// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "lirelab/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "lirelab/errors.hpp"

namespace lirelab {

ParamTensor::ParamTensor(int query_classes, int vocab_size, double fill)
    : query_classes_(query_classes), vocab_size_(vocab_size) {
  if (query_classes <= 0 || vocab_size <= 0) {
    throw ConfigError("ParamTensor: shape must be positive");
  }
  data_.assign(static_cast<std::size_t>(query_classes) * vocab_size * vocab_size, fill);
}

ParamTensor& ParamTensor::operator+=(const ParamTensor& other) {
  add_scaled(1.0, other);
  return *this;
}

ParamTensor& ParamTensor::operator-=(const ParamTensor& other) {
  add_scaled(-1.0, other);
  return *this;
}

ParamTensor& ParamTensor::operator*=(double scale) {
  for (double& v : data_) v *= scale;
  return *this;
}

void ParamTensor::add_scaled(double scale, const ParamTensor& other) {
  if (!same_shape(other)) throw ConfigError("ParamTensor: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += scale * other.data_[i];
}

void ParamTensor::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

double ParamTensor::max_abs() const noexcept {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool ParamTensor::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

bool ParamTensor::is_zero() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return v == 0.0; });
}

ParamTensor operator+(ParamTensor lhs, const ParamTensor& rhs) { return lhs += rhs; }
ParamTensor operator-(ParamTensor lhs, const ParamTensor& rhs) { return lhs -= rhs; }
ParamTensor operator*(double scale, ParamTensor t) { return t *= scale; }

double max_abs_difference(const ParamTensor& a, const ParamTensor& b) {
  if (!a.same_shape(b)) throw ConfigError("max_abs_difference: shape mismatch");
  double m = 0.0;
  auto fa = a.flat();
  auto fb = b.flat();
  for (std::size_t i = 0; i < fa.size(); ++i) m = std::max(m, std::abs(fa[i] - fb[i]));
  return m;
}

double relative_error(const ParamTensor& a, const ParamTensor& b) {
  const double diff = max_abs_difference(a, b);
  const double scale = std::max(a.max_abs(), b.max_abs());
  if (scale == 0.0) return 0.0;
  return diff / scale;
}

}  // namespace lirelab
