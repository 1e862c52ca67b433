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

#include "sgnl/baseline.hpp"

#include "sgnl/errors.hpp"
#include "sgnl/nn.hpp"

namespace sgnl {

std::string_view to_string(BaselineVariant variant) {
  return variant == BaselineVariant::kFcn ? "fcn" : "cnn";
}

BaselineVariant parse_baseline_variant(std::string_view text) {
  if (text == "fcn") return BaselineVariant::kFcn;
  if (text == "cnn") return BaselineVariant::kCnn;
  throw ValidationError("unknown baseline variant '" + std::string(text) +
                        "' (expected fcn or cnn)");
}

BaselineModel::BaselineModel(BaselineVariant variant, std::size_t input_dim,
                             std::size_t classes, Rng& rng)
    : variant_(variant), input_dim_(input_dim), classes_(classes) {
  if (classes < 2) throw ValidationError("baseline needs at least 2 classes");
  std::size_t features = input_dim;
  if (variant == BaselineVariant::kCnn) {
    conv_ = ConvStack::create(params_, "baseline", input_dim, rng);
    features = conv_->shape().flat;
  } else if (input_dim == 0) {
    throw ShapeError("baseline input width must be positive");
  }
  params_.add("baseline.hidden.weight",
              glorot_uniform({kBaselineHidden, features}, features,
                             kBaselineHidden, rng));
  params_.add("baseline.hidden.bias", Tensor({kBaselineHidden}));
  params_.add("baseline.out.weight",
              glorot_uniform({classes, kBaselineHidden}, kBaselineHidden,
                             classes, rng));
  params_.add("baseline.out.bias", Tensor({classes}));
  bind();
}

BaselineModel::BaselineModel(BaselineVariant variant, std::size_t input_dim,
                             std::size_t classes, ParamSet params)
    : variant_(variant),
      input_dim_(input_dim),
      classes_(classes),
      params_(std::move(params)) {
  bind();
}

void BaselineModel::bind() {
  std::size_t features = input_dim_;
  if (variant_ == BaselineVariant::kCnn) {
    conv_ = ConvStack::bind(params_, "baseline", input_dim_);
    features = conv_->shape().flat;
  }
  hidden_w_ =
      params_.require("baseline.hidden.weight", {kBaselineHidden, features});
  hidden_b_ = params_.require("baseline.hidden.bias", {kBaselineHidden});
  out_w_ = params_.require("baseline.out.weight", {classes_, kBaselineHidden});
  out_b_ = params_.require("baseline.out.bias", {classes_});
}

std::vector<double> BaselineModel::forward(std::span<const double> z0,
                                           BaselineCache* cache) const {
  if (z0.size() != input_dim_) {
    throw ShapeError("baseline expects width " + std::to_string(input_dim_) +
                     ", got " + std::to_string(z0.size()));
  }
  BaselineCache local;
  BaselineCache& c = cache ? *cache : local;
  if (conv_) {
    c.features = conv_->forward(params_, z0, &c.conv);
  } else {
    c.features.assign(z0.begin(), z0.end());
  }
  c.hidden = nn::dense_forward(c.features, params_.value(hidden_w_),
                               params_.value(hidden_b_).data());
  nn::relu_inplace(c.hidden);
  const auto logits = nn::dense_forward(c.hidden, params_.value(out_w_),
                                        params_.value(out_b_).data());
  c.probs = nn::softmax(logits);
  return c.probs;
}

void BaselineModel::backward(std::span<const double> z0,
                             const BaselineCache& cache,
                             std::span<const double> dlogits,
                             GradBuffer& grads) const {
  std::vector<double> dhidden(kBaselineHidden, 0.0);
  nn::dense_backward(cache.hidden, params_.value(out_w_), dlogits,
                     grads[out_w_], grads[out_b_].data(), dhidden);
  nn::relu_backward(cache.hidden, dhidden);
  if (!conv_) {
    nn::dense_backward(cache.features, params_.value(hidden_w_), dhidden,
                       grads[hidden_w_], grads[hidden_b_].data(), {});
    return;
  }
  std::vector<double> dfeatures(cache.features.size(), 0.0);
  nn::dense_backward(cache.features, params_.value(hidden_w_), dhidden,
                     grads[hidden_w_], grads[hidden_b_].data(), dfeatures);
  conv_->backward(params_, z0, cache.conv, dfeatures, grads, {});
}

}  // namespace sgnl
