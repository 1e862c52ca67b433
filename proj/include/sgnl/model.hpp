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
#include <span>
#include <string>
#include <vector>

#include "sgnl/baseline.hpp"
#include "sgnl/checkpoint.hpp"
#include "sgnl/encoder.hpp"
#include "sgnl/fusion.hpp"
#include "sgnl/gnn.hpp"
#include "sgnl/knn.hpp"
#include "sgnl/param_set.hpp"

namespace sgnl {

/// Hyperparameters persisted next to the weights.
struct ModelConfig {
  std::size_t input_dim = 0;  // d₀
  std::size_t classes = 0;    // N seen classes
  std::size_t latent_dim = kLatentDim;
  std::size_t heads = kDefaultHeads;
  double alpha = 0.5;
  double tau = 0.5;
  std::size_t k = kDefaultK;
  double eps = kDefaultKnnEps;
  /// Bundle label ids of the seen classes; position = internal class id.
  std::vector<std::int32_t> seen_class_ids;
  std::vector<std::string> seen_class_names;

  FusionConfig fusion() const { return {alpha, tau, false, 0.0}; }

  nlohmann::json to_json() const;
  static ModelConfig from_json(const nlohmann::json& j);
};

/// Encoder + GNN head over one parameter table.
class SignalModel {
 public:
  /// Fresh, seeded initialization.
  SignalModel(ModelConfig config, Rng& rng);
  /// Binds to an existing table; throws FormatError on missing/misshapen
  /// tensors.
  SignalModel(ModelConfig config, ParamSet params);

  const ModelConfig& config() const noexcept { return config_; }
  ModelConfig& config() noexcept { return config_; }
  ParamSet& params() noexcept { return params_; }
  const ParamSet& params() const noexcept { return params_; }
  const Encoder& encoder() const noexcept { return encoder_; }
  const GnnHead& gnn() const noexcept { return gnn_; }

  std::vector<double> encode(std::span<const double> z0) const {
    return encoder_.forward(params_, z0);
  }

 private:
  ModelConfig config_;
  ParamSet params_;
  Encoder encoder_;
  GnnHead gnn_;
};

/// Trained model plus its KNN index, as stored in one checkpoint.
struct SignalBundle {
  SignalModel model;
  KnnIndex index;
};

Checkpoint to_checkpoint(const SignalModel& model, const KnnIndex& index);
SignalBundle signal_from_checkpoint(const Checkpoint& checkpoint);

struct BaselineBundle {
  BaselineModel model;
  ModelConfig config;  // classes, input_dim, seen ids; other fields unused
};

Checkpoint to_checkpoint(const BaselineModel& model, const ModelConfig& config);
BaselineBundle baseline_from_checkpoint(const Checkpoint& checkpoint);

/// "signal", "baseline-fcn" or "baseline-cnn".
std::string checkpoint_kind(const Checkpoint& checkpoint);

}  // namespace sgnl
