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
#include <span>
#include <vector>

#include "sgnl/tensor.hpp"

namespace sgnl {

inline constexpr std::size_t kDefaultK = 5;
inline constexpr double kDefaultKnnEps = 1e-8;

/// Frozen store of training latents for distance-weighted voting.
///
/// Prediction takes the K nearest stored latents by squared Euclidean
/// distance (ties → lower record index) and returns
///   p = Σₖ wₖ·onehot(yₖ) / Σₖ wₖ,   wₖ = 1 / (‖z − zₖ‖² + ε).
/// Search is exhaustive; the index is immutable after fit.
class KnnIndex {
 public:
  /// Throws ValidationError on empty input, K = 0, K > M, ε ≤ 0, labels
  /// outside [0, classes), or non-finite latents.
  static KnnIndex fit(Tensor latents, std::vector<std::size_t> labels,
                      std::size_t classes, std::size_t k = kDefaultK,
                      double eps = kDefaultKnnEps);

  std::vector<double> predict(std::span<const double> z) const;

  const Tensor& latents() const noexcept { return latents_; }
  const std::vector<std::size_t>& labels() const noexcept { return labels_; }
  std::size_t classes() const noexcept { return classes_; }
  std::size_t k() const noexcept { return k_; }
  double eps() const noexcept { return eps_; }
  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t dim() const noexcept { return latents_.cols(); }

 private:
  Tensor latents_;  // [M × d]
  std::vector<std::size_t> labels_;
  std::size_t classes_ = 0;
  std::size_t k_ = 0;
  double eps_ = 0.0;
};

}  // namespace sgnl
