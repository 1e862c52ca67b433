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
#include <vector>

namespace sgnl {

class SignalModel;
class KnnIndex;

struct FusionConfig {
  double alpha = 0.5;  // weight of the GNN branch
  double tau = 0.5;    // confidence threshold
  bool entropy_routing = false;
  double entropy_tau = 0.0;  // used only when entropy_routing is set

  /// Throws ValidationError when α or τ leave [0, 1] or τ_e < 0.
  void validate() const;
};

/// Routing outcome: a seen class id, or unseen.
class Decision {
 public:
  static Decision seen(std::size_t cls) { return Decision(cls); }
  static Decision unseen() { return Decision(std::nullopt); }

  bool is_seen() const noexcept { return cls_.has_value(); }
  bool is_unseen() const noexcept { return !cls_.has_value(); }
  /// Precondition: is_seen().
  std::size_t seen_class() const { return cls_.value(); }

  friend bool operator==(const Decision&, const Decision&) = default;

 private:
  explicit Decision(std::optional<std::size_t> cls) : cls_(cls) {}
  std::optional<std::size_t> cls_;
};

struct Prediction {
  std::vector<double> p_gnn;
  std::vector<double> p_knn;
  std::vector<double> p_ens;
  double entropy = 0.0;
  double max_conf = 0.0;
  Decision decision = Decision::unseen();
};

/// α·p_gnn + (1−α)·p_knn. Throws ValidationError for α ∉ [0,1], mismatched
/// lengths, or either input off the simplex by more than 1e-6.
std::vector<double> fuse(std::span<const double> p_gnn,
                         std::span<const double> p_knn, double alpha);

/// Unseen when max(p_ens) < τ, or (entropy routing on) entropy > τ_e;
/// otherwise Seen(argmax p_ens) with the lowest index winning ties.
Decision route(std::span<const double> p_ens, double entropy,
               const FusionConfig& config);

/// Lowest index of the maximum entry.
std::size_t argmax(std::span<const double> p);

/// encode → (GNN head ‖ KNN) → fuse → route, recording every intermediate.
Prediction predict(std::span<const double> z0, const SignalModel& model,
                   const KnnIndex& index, const FusionConfig& config);

}  // namespace sgnl
