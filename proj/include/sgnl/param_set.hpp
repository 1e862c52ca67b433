// Copyright (c) 2026 The sgnl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sgnl/tensor.hpp"

namespace sgnl {

using ParamId = std::size_t;

/// Gradient storage parallel to a ParamSet's entries (same order and shapes).
using GradBuffer = std::vector<Tensor>;

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Named trainable tensors with gradient accumulators and Adam moments.
class ParamSet {
 public:
  /// Registers a parameter; throws ValidationError on a duplicate name.
  ParamId add(std::string name, Tensor value);

  std::size_t size() const noexcept { return entries_.size(); }
  const std::string& name(ParamId id) const { return entries_.at(id).name; }
  const Tensor& value(ParamId id) const { return entries_.at(id).value; }
  Tensor& value(ParamId id) { return entries_.at(id).value; }
  const Tensor& grad(ParamId id) const { return entries_.at(id).grad; }
  Tensor& grad(ParamId id) { return entries_.at(id).grad; }

  std::optional<ParamId> find(std::string_view name) const;
  /// Like find(), but throws FormatError when absent or the shape differs.
  ParamId require(std::string_view name,
                  const std::vector<std::size_t>& dims) const;

  /// Zero-filled buffer shaped like every parameter.
  GradBuffer make_grad_buffer() const;
  /// grad += scale · buffer, entry by entry.
  void accumulate(const GradBuffer& buffer, double scale = 1.0);
  void zero_grad();

  std::int64_t step() const noexcept { return step_; }

  /// Values only (no gradients or moments), in entry order.
  std::vector<Tensor> snapshot_values() const;
  void restore_values(const std::vector<Tensor>& values);

  friend void adam_step(ParamSet& params, const AdamConfig& config);

 private:
  struct Entry {
    std::string name;
    Tensor value;
    Tensor grad;
    Tensor m;
    Tensor v;
  };
  std::vector<Entry> entries_;
  std::int64_t step_ = 0;
};

/// One bias-corrected Adam update over every parameter; zeroes gradients.
void adam_step(ParamSet& params, const AdamConfig& config);

}  // namespace sgnl
