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
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sgnl/fusion.hpp"

namespace sgnl {

enum class Protocol { kClosedSet, kOpenSet };

std::string_view to_string(Protocol protocol);

/// Ground truth for one sample. Decision doubles as the truth type: a seen
/// class id, or unseen.
using Truth = Decision;

struct MetricsReport {
  Protocol protocol = Protocol::kClosedSet;
  std::size_t classes = 0;  // N; the open-set matrix is (N+1)², unseen last
  std::size_t samples = 0;
  double accuracy = 0.0;
  double f1_macro = 0.0;
  double eer = 0.0;
  /// EER of the hard routed decisions; depends on τ (see sweep_tau).
  double decision_eer = 0.0;
  std::size_t unseen_routed = 0;
  std::vector<std::vector<std::size_t>> confusion;  // [truth][predicted]

  nlohmann::json to_json() const;
  /// Header `truth,<col names...>`, one row per truth class.
  std::string confusion_csv(std::span<const std::string> class_names) const;
};

struct SweepRow {
  double tau = 0.0;
  double eer_closed = 0.0;
  double eer_open = 0.0;
  MetricsReport report;  // open-set report at this τ
};

struct SweepResult {
  std::vector<SweepRow> rows;

  nlohmann::json to_json() const;
  /// Header exactly `tau,eer_closed,eer_open`.
  std::string to_csv() const;
};

/// Equal error rate of `scores` where labels[i] != 0 marks a positive.
///
/// Every distinct score t (plus +∞) is an operating point: positive iff
/// score ≥ t, FAR = accepted negatives / negatives, FRR = rejected positives
/// / positives. The first point with FRR ≥ FAR is returned as is when the
/// two are equal, otherwise the crossing is interpolated linearly against
/// the previous point. Throws ValidationError on length mismatch, empty
/// input, or a single class.
double compute_eer(std::span<const double> scores,
                   std::span<const std::uint8_t> labels);

/// Closed-set metrics on argmax(p_ens); truths are internal seen ids < N.
/// Macro F1 averages classes that occur in truths or predictions; EER is
/// the macro mean of one-vs-rest EERs on p_ens[c] over classes with both
/// positives and negatives. Throws ValidationError on empty input.
MetricsReport evaluate_closed(std::span<const Prediction> predictions,
                              std::span<const std::size_t> truths);

/// Open-set accuracy, macro F1 and confusion over N+1 classes from the
/// stored routing decisions, without any EER (eer = decision_eer = 0).
/// Accepts inputs with no unseen truths.
MetricsReport score_decisions(std::span<const Prediction> predictions,
                              std::span<const Truth> truths,
                              std::size_t classes);

/// score_decisions plus the threshold-free seen-vs-unseen EER on max_conf
/// (positive = seen) and the EER of the routed decisions. Throws
/// ValidationError on empty input or when either group is missing.
MetricsReport evaluate_open(std::span<const Prediction> predictions,
                            std::span<const Truth> truths,
                            std::size_t classes);

/// Re-routes the stored p_ens/entropy at each τ of an ascending grid.
/// eer_open is the seen-vs-unseen EER of the routed decisions; eer_closed
/// the macro one-vs-rest EER of the routed one-hot decisions over samples
/// whose truth is seen. Both move with τ, unlike the threshold-free EER.
SweepResult sweep_tau(std::span<const Prediction> predictions,
                      std::span<const Truth> truths, std::size_t classes,
                      std::span<const double> grid,
                      const FusionConfig& base);

/// `steps` evenly spaced values from lo to hi inclusive; steps = 1 → {lo}.
std::vector<double> tau_grid(double lo, double hi, std::size_t steps);

}  // namespace sgnl
