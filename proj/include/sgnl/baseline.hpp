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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sgnl/encoder.hpp"
#include "sgnl/param_set.hpp"
#include "sgnl/rng.hpp"

namespace sgnl {

enum class BaselineVariant { kFcn, kCnn };

std::string_view to_string(BaselineVariant variant);
/// Accepts "fcn" or "cnn"; throws ValidationError otherwise.
BaselineVariant parse_baseline_variant(std::string_view text);

inline constexpr std::size_t kBaselineHidden = 128;

struct BaselineCache {
  ConvStackCache conv;
  std::vector<double> features;  // dense-block input
  std::vector<double> hidden;    // post-ReLU
  std::vector<double> probs;
};

/// Standalone classifiers: FCN is dense(128)→ReLU→dense(N)→softmax on the raw
/// embedding; CNN runs the same conv stack as the encoder first. Parameters
/// live under "baseline.*".
class BaselineModel {
 public:
  BaselineModel(BaselineVariant variant, std::size_t input_dim,
                std::size_t classes, Rng& rng);
  /// Rebinds to an existing parameter table (e.g. from a checkpoint).
  BaselineModel(BaselineVariant variant, std::size_t input_dim,
                std::size_t classes, ParamSet params);

  BaselineVariant variant() const noexcept { return variant_; }
  std::size_t input_dim() const noexcept { return input_dim_; }
  std::size_t classes() const noexcept { return classes_; }
  ParamSet& params() noexcept { return params_; }
  const ParamSet& params() const noexcept { return params_; }

  std::vector<double> forward(std::span<const double> z0,
                              BaselineCache* cache = nullptr) const;
  /// Backpropagates dL/dlogits into grads.
  void backward(std::span<const double> z0, const BaselineCache& cache,
                std::span<const double> dlogits, GradBuffer& grads) const;

 private:
  void bind();

  BaselineVariant variant_;
  std::size_t input_dim_;
  std::size_t classes_;
  ParamSet params_;
  std::optional<ConvStack> conv_;
  ParamId hidden_w_ = 0, hidden_b_ = 0, out_w_ = 0, out_b_ = 0;
};

}  // namespace sgnl
