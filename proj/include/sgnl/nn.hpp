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

namespace sgnl::nn {

// All backward functions ACCUMULATE into their gradient outputs (+=), so a
// caller can sum contributions across samples without extra buffers. Input
// gradients (dx) are optional: pass an empty span / nullptr to skip them.

/// y = W·x + b with W of shape [m × n].
std::vector<double> dense_forward(std::span<const double> x, const Tensor& w,
                                  std::span<const double> b);
void dense_backward(std::span<const double> x, const Tensor& w,
                    std::span<const double> dy, Tensor& dw,
                    std::span<double> db, std::span<double> dx);

/// Valid (unpadded) stride-1 convolution.
/// x: [C_in × L], kernels: [C_out × C_in × k], bias: C_out → [C_out × (L−k+1)].
Tensor conv1d_forward(const Tensor& x, const Tensor& kernels,
                      std::span<const double> bias);
void conv1d_backward(const Tensor& x, const Tensor& kernels, const Tensor& dy,
                     Tensor& dkernels, std::span<double> dbias, Tensor* dx);

/// Non-overlapping window-2 max pooling over the last axis of [C × L].
/// A trailing element is dropped when L is odd.
struct PoolResult {
  Tensor out;
  /// Flat index into the input for each output element; first max on ties.
  std::vector<std::size_t> argmax;
};
PoolResult maxpool1d(const Tensor& x);
void maxpool1d_backward(const PoolResult& pooled, const Tensor& dy, Tensor& dx);

void relu_inplace(std::span<double> x);
/// Zeroes dy wherever the forward output y was not positive.
void relu_backward(std::span<const double> y, std::span<double> dy);

/// Max-subtracted softmax.
std::vector<double> softmax(std::span<const double> logits);
/// Gradient w.r.t. logits given the softmax output p and dL/dp.
std::vector<double> softmax_backward(std::span<const double> p,
                                     std::span<const double> dp);

}  // namespace sgnl::nn
