// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lirelab {

/// Dense [Q][V][V] array of doubles, row-major. Holds policy logits and
/// every gradient with respect to them; the last axis is the next token.
class ParamTensor {
 public:
  ParamTensor() = default;
  ParamTensor(int query_classes, int vocab_size, double fill = 0.0);

  int query_classes() const noexcept { return query_classes_; }
  int vocab_size() const noexcept { return vocab_size_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& at(int tag, int prev, int next) { return data_[index(tag, prev, next)]; }
  double at(int tag, int prev, int next) const { return data_[index(tag, prev, next)]; }

  std::span<double> row(int tag, int prev) {
    return {data_.data() + index(tag, prev, 0), static_cast<std::size_t>(vocab_size_)};
  }
  std::span<const double> row(int tag, int prev) const {
    return {data_.data() + index(tag, prev, 0), static_cast<std::size_t>(vocab_size_)};
  }

  std::span<double> flat() noexcept { return data_; }
  std::span<const double> flat() const noexcept { return data_; }

  bool same_shape(const ParamTensor& other) const noexcept {
    return query_classes_ == other.query_classes_ && vocab_size_ == other.vocab_size_;
  }

  ParamTensor& operator+=(const ParamTensor& other);
  ParamTensor& operator-=(const ParamTensor& other);
  ParamTensor& operator*=(double scale);

  /// this += scale * other
  void add_scaled(double scale, const ParamTensor& other);

  void fill(double value);
  double max_abs() const noexcept;
  bool all_finite() const noexcept;
  bool is_zero() const noexcept;

  friend bool operator==(const ParamTensor&, const ParamTensor&) = default;

 private:
  std::size_t index(int tag, int prev, int next) const noexcept {
    return (static_cast<std::size_t>(tag) * static_cast<std::size_t>(vocab_size_) +
            static_cast<std::size_t>(prev)) *
               static_cast<std::size_t>(vocab_size_) +
           static_cast<std::size_t>(next);
  }

  int query_classes_ = 0;
  int vocab_size_ = 0;
  std::vector<double> data_;
};

ParamTensor operator+(ParamTensor lhs, const ParamTensor& rhs);
ParamTensor operator-(ParamTensor lhs, const ParamTensor& rhs);
ParamTensor operator*(double scale, ParamTensor t);

/// max |a - b| / max(|a|_inf, |b|_inf); 0 when both are exactly zero.
double relative_error(const ParamTensor& a, const ParamTensor& b);
double max_abs_difference(const ParamTensor& a, const ParamTensor& b);

}  // namespace lirelab
