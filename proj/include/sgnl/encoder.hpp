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
#include <string>
#include <vector>

#include "sgnl/nn.hpp"
#include "sgnl/param_set.hpp"
#include "sgnl/rng.hpp"

namespace sgnl {

inline constexpr std::size_t kLatentDim = 64;
inline constexpr std::size_t kConv1Filters = 64;
inline constexpr std::size_t kConv2Filters = 128;
inline constexpr std::size_t kKernelSize = 3;
/// Smallest embedding width that survives conv→pool→conv→pool.
inline constexpr std::size_t kMinConvInput = 10;

/// Sequence lengths through the conv stack for an input of width d₀.
struct ConvShape {
  std::size_t input = 0;  // d₀
  std::size_t conv1 = 0;  // d₀ − 2
  std::size_t pool1 = 0;
  std::size_t conv2 = 0;
  std::size_t pool2 = 0;
  std::size_t flat = 0;  // 128 · pool2

  /// Throws ShapeError when d₀ < kMinConvInput.
  static ConvShape for_input(std::size_t input_dim);
};

/// Glorot-uniform tensor: U(±√(6/(fan_in+fan_out))).
Tensor glorot_uniform(std::vector<std::size_t> dims, std::size_t fan_in,
                      std::size_t fan_out, Rng& rng);

struct ConvStackCache {
  Tensor conv1;  // post-ReLU
  nn::PoolResult pool1;
  Tensor conv2;  // post-ReLU
  nn::PoolResult pool2;
};

/// Two valid 1-D convolutions (64 then 128 filters, kernel 3), each followed
/// by ReLU and window-2 max pooling. The input vector is read as a
/// single-channel sequence; the output is the flattened [128 × pool2] map.
class ConvStack {
 public:
  static ConvStack create(ParamSet& params, const std::string& prefix,
                          std::size_t input_dim, Rng& rng);
  static ConvStack bind(const ParamSet& params, const std::string& prefix,
                        std::size_t input_dim);

  const ConvShape& shape() const noexcept { return shape_; }

  std::vector<double> forward(const ParamSet& params,
                              std::span<const double> x,
                              ConvStackCache* cache) const;
  void backward(const ParamSet& params, std::span<const double> x,
                const ConvStackCache& cache, std::span<const double> dflat,
                GradBuffer& grads, std::span<double> dx) const;

 private:
  ConvShape shape_;
  ParamId conv1_w_ = 0, conv1_b_ = 0, conv2_w_ = 0, conv2_b_ = 0;
};

struct EncoderCache {
  ConvStackCache conv;
  std::vector<double> flat;
};

/// The latent projection f: ℝ^{d₀} → ℝ^{64}: conv stack, flatten, then a
/// linear dense layer to 64 (no output nonlinearity). Parameters live under
/// "<prefix>.conv1.*", "<prefix>.conv2.*", "<prefix>.proj.*".
class Encoder {
 public:
  static Encoder create(ParamSet& params, std::size_t input_dim, Rng& rng,
                        const std::string& prefix = "encoder");
  static Encoder bind(const ParamSet& params, std::size_t input_dim,
                      const std::string& prefix = "encoder");

  std::size_t input_dim() const noexcept { return conv_.shape().input; }
  const ConvShape& shape() const noexcept { return conv_.shape(); }

  std::vector<double> forward(const ParamSet& params,
                              std::span<const double> z0,
                              EncoderCache* cache = nullptr) const;
  /// dz0 may be empty when the input gradient is not needed.
  void backward(const ParamSet& params, std::span<const double> z0,
                const EncoderCache& cache, std::span<const double> dz,
                GradBuffer& grads, std::span<double> dz0 = {}) const;

 private:
  ConvStack conv_;
  ParamId proj_w_ = 0, proj_b_ = 0;
};

}  // namespace sgnl
