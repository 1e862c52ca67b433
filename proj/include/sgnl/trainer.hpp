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
#include <span>
#include <vector>

#include "json.hpp"
#include "sgnl/baseline.hpp"
#include "sgnl/bundle.hpp"
#include "sgnl/model.hpp"

namespace sgnl {

struct TrainConfig {
  double lr = 1e-3;
  std::size_t batch_size = 32;
  std::size_t max_epochs = 50;
  std::size_t patience = 5;
  std::uint64_t seed = 0;
  /// Bundle label ids treated as seen; empty means every labelled class.
  std::vector<std::int32_t> seen_class_ids;
  std::size_t heads = kDefaultHeads;
  std::size_t k = kDefaultK;
  double eps = kDefaultKnnEps;
  double alpha = 0.5;
  double tau = 0.5;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double dev_accuracy = 0.0;
};

struct TrainReport {
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;  // 1-based; highest dev accuracy, earliest wins
  bool stopped_early = false;

  nlohmann::json to_json() const;
};

struct TrainResult {
  SignalModel model;
  KnnIndex index;
  TrainReport report;
};

struct BaselineTrainResult {
  BaselineModel model;
  ModelConfig config;
  TrainReport report;
};

/// −ln(max(p_y, 1e-12)). Throws ValidationError when y ≥ |p|.
double cross_entropy(std::span<const double> p, std::size_t y);

/// Joint encoder + GNN-head training under mean cross-entropy with Adam.
/// Dev accuracy (GNN path alone) is checked after every epoch; training stops
/// once it has not improved for `patience` epochs, the best epoch's weights
/// are restored, and the KNN index is fitted on the train-split latents of
/// that encoder. Deterministic in (bundle, config).
TrainResult train(const EmbeddingBundle& bundle, const TrainConfig& config);

/// Same loop and stopping rule for the FCN/CNN baselines.
BaselineTrainResult train_baseline(const EmbeddingBundle& bundle,
                                   const TrainConfig& config,
                                   BaselineVariant variant);

/// Resolves the seen classes of a bundle: validated ids in the order given,
/// or every class in id order when `requested` is empty. Internal class c is
/// the c-th entry.
std::vector<std::int32_t> resolve_seen_classes(
    const EmbeddingBundle& bundle, std::span<const std::int32_t> requested);

/// Number of fixed work partitions per mini-batch. Per-partition gradients
/// are reduced in partition order, so results never depend on thread count.
inline constexpr std::size_t kGradPartitions = 8;

}  // namespace sgnl
