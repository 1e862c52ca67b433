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
#include <vector>

#include "sgnl/tensor.hpp"

namespace sgnl::nn {

/// Projection weights for multi-head self-attention over a set of N nodes of
/// width d. Heads are stacked along the rows of the Q/K/V projections:
/// rows [h·d_h, (h+1)·d_h) belong to head h.
struct MhaWeights {
  const Tensor& wq;  // [H·d_h × d]
  const Tensor& wk;  // [H·d_h × d]
  const Tensor& wv;  // [H·d_h × d]
  const Tensor& wo;  // [d × H·d_h]
  std::size_t heads;
};

struct MhaGrads {
  Tensor& wq;
  Tensor& wk;
  Tensor& wv;
  Tensor& wo;
};

struct MhaCache {
  Tensor x;
  Tensor q, k, v;                 // [N × H·d_h]
  std::vector<Tensor> attention;  // per head, [N × N], rows sum to 1
  Tensor mixed;                   // concatenated head outputs [N × H·d_h]
};

/// Scaled dot-product self-attention (scale 1/√d_h), heads concatenated then
/// output-projected. No positional terms, residual, or normalization: the
/// output is permutation-equivariant in the node rows.
Tensor mha_forward(const Tensor& x, const MhaWeights& w, MhaCache* cache);

/// Accumulates parameter gradients; adds dL/dx into *dx when non-null.
void mha_backward(const MhaCache& cache, const MhaWeights& w, const Tensor& dy,
                  MhaGrads grads, Tensor* dx);

}  // namespace sgnl::nn
