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

#include "sgnl/attention.hpp"
#include "sgnl/param_set.hpp"
#include "sgnl/rng.hpp"

namespace sgnl {

inline constexpr std::size_t kDefaultHeads = 4;

struct GnnOutput {
  std::vector<double> p;       // p_gnn, on the simplex
  double entropy = 0.0;        // nats, in [0, ln N]
  std::vector<double> logits;  // one per class node
  std::vector<Tensor> attention;  // per head [N × N]
};

struct GnnCache {
  std::vector<double> s;  // projected query
  nn::MhaCache mha;
  Tensor refined;  // attention output, [N × d]
  std::vector<double> p;
};

/// Query-conditioned attention over N class prototypes.
///
///   s  = W_s z
///   ẽᵢ = eᵢ + s                       (every prototype row)
///   ẽ′ = MultiHeadSelfAttention(ẽ)   (no residual, no normalization)
///   ℓᵢ = wᵀ ẽ′ᵢ,   p = softmax(ℓ)
///
/// Parameters: "gnn.prototypes" [N×d], "gnn.ws" [d×d], "gnn.attn.{wq,wk,wv,wo}",
/// "gnn.logit_w" [d].
class GnnHead {
 public:
  /// Prototypes ~ N(0, 1/d); projections Glorot-uniform.
  static GnnHead create(ParamSet& params, std::size_t classes, std::size_t dim,
                        std::size_t heads, Rng& rng);
  static GnnHead bind(const ParamSet& params, std::size_t classes,
                      std::size_t dim, std::size_t heads);

  std::size_t classes() const noexcept { return classes_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t heads() const noexcept { return heads_; }
  ParamId prototypes_id() const noexcept { return prototypes_; }

  GnnOutput forward(const ParamSet& params, std::span<const double> z,
                    GnnCache* cache = nullptr) const;
  /// Backpropagates dL/dlogits; adds dL/dz into dz when non-empty.
  void backward(const ParamSet& params, std::span<const double> z,
                const GnnCache& cache, std::span<const double> dlogits,
                GradBuffer& grads, std::span<double> dz = {}) const;

 private:
  nn::MhaWeights mha_weights(const ParamSet& params) const;

  std::size_t classes_ = 0, dim_ = 0, heads_ = 0;
  ParamId prototypes_ = 0, ws_ = 0, wq_ = 0, wk_ = 0, wv_ = 0, wo_ = 0,
          logit_w_ = 0;
};

/// Shannon entropy −Σ pᵢ ln pᵢ with 0·ln 0 = 0. Throws ValidationError when p
/// has a negative entry or sums away from 1 by more than 1e-6.
double attention_entropy(std::span<const double> p);

}  // namespace sgnl
