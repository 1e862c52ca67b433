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

#include "sgnl/param_set.hpp"

#include <cmath>

#include "sgnl/errors.hpp"

namespace sgnl {

ParamId ParamSet::add(std::string name, Tensor value) {
  if (find(name)) throw ValidationError("duplicate parameter name: " + name);
  Entry e;
  e.name = std::move(name);
  e.grad = Tensor(value.dims());
  e.m = Tensor(value.dims());
  e.v = Tensor(value.dims());
  e.value = std::move(value);
  entries_.push_back(std::move(e));
  return entries_.size() - 1;
}

std::optional<ParamId> ParamSet::find(std::string_view name) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].name == name) return i;
  }
  return std::nullopt;
}

ParamId ParamSet::require(std::string_view name,
                          const std::vector<std::size_t>& dims) const {
  const auto id = find(name);
  if (!id) {
    throw FormatError(FormatError::Kind::kInconsistent,
                      "missing parameter tensor '" + std::string(name) + "'");
  }
  if (entries_[*id].value.dims() != dims) {
    throw FormatError(FormatError::Kind::kDimsMismatch,
                      "parameter '" + std::string(name) + "' has shape " +
                          shape_string(entries_[*id].value.dims()) +
                          ", expected " + shape_string(dims));
  }
  return *id;
}

GradBuffer ParamSet::make_grad_buffer() const {
  GradBuffer buffer;
  buffer.reserve(entries_.size());
  for (const auto& e : entries_) buffer.emplace_back(e.value.dims());
  return buffer;
}

void ParamSet::accumulate(const GradBuffer& buffer, double scale) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    axpy(scale, buffer[i].data(), entries_[i].grad.data());
  }
}

void ParamSet::zero_grad() {
  for (auto& e : entries_) e.grad.fill(0.0);
}

std::vector<Tensor> ParamSet::snapshot_values() const {
  std::vector<Tensor> values;
  values.reserve(entries_.size());
  for (const auto& e : entries_) values.push_back(e.value);
  return values;
}

void ParamSet::restore_values(const std::vector<Tensor>& values) {
  if (values.size() != entries_.size()) {
    throw ValidationError("snapshot does not match the parameter layout");
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!values[i].same_shape(entries_[i].value)) {
      throw ValidationError("snapshot shape mismatch for " + entries_[i].name);
    }
    entries_[i].value = values[i];
  }
}

void adam_step(ParamSet& params, const AdamConfig& config) {
  ++params.step_;
  const double t = static_cast<double>(params.step_);
  const double correction1 = 1.0 - std::pow(config.beta1, t);
  const double correction2 = 1.0 - std::pow(config.beta2, t);
  for (auto& e : params.entries_) {
    auto value = e.value.data();
    auto grad = e.grad.data();
    auto m = e.m.data();
    auto v = e.v.data();
    for (std::size_t i = 0; i < value.size(); ++i) {
      const double g = grad[i];
      m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * g;
      v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * g * g;
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      value[i] -= config.lr * m_hat / (std::sqrt(v_hat) + config.eps);
      grad[i] = 0.0;
    }
  }
}

}  // namespace sgnl
