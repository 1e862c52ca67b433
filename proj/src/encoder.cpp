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

#include "sgnl/encoder.hpp"

#include <cmath>

#include "sgnl/errors.hpp"

namespace sgnl {

ConvShape ConvShape::for_input(std::size_t input_dim) {
  if (input_dim < kMinConvInput) {
    throw ShapeError("input too short for conv stack: embedding width " +
                     std::to_string(input_dim) + " < minimum " +
                     std::to_string(kMinConvInput));
  }
  ConvShape s;
  s.input = input_dim;
  s.conv1 = input_dim - (kKernelSize - 1);
  s.pool1 = s.conv1 / 2;
  s.conv2 = s.pool1 - (kKernelSize - 1);
  s.pool2 = s.conv2 / 2;
  s.flat = kConv2Filters * s.pool2;
  return s;
}

Tensor glorot_uniform(std::vector<std::size_t> dims, std::size_t fan_in,
                      std::size_t fan_out, Rng& rng) {
  Tensor t(std::move(dims));
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (double& v : t.data()) v = rng.uniform(-limit, limit);
  return t;
}

ConvStack ConvStack::create(ParamSet& params, const std::string& prefix,
                            std::size_t input_dim, Rng& rng) {
  ConvStack stack;
  stack.shape_ = ConvShape::for_input(input_dim);
  stack.conv1_w_ = params.add(
      prefix + ".conv1.weight",
      glorot_uniform({kConv1Filters, 1, kKernelSize}, kKernelSize,
                     kConv1Filters * kKernelSize, rng));
  stack.conv1_b_ = params.add(prefix + ".conv1.bias", Tensor({kConv1Filters}));
  stack.conv2_w_ = params.add(
      prefix + ".conv2.weight",
      glorot_uniform({kConv2Filters, kConv1Filters, kKernelSize},
                     kConv1Filters * kKernelSize, kConv2Filters * kKernelSize,
                     rng));
  stack.conv2_b_ = params.add(prefix + ".conv2.bias", Tensor({kConv2Filters}));
  return stack;
}

ConvStack ConvStack::bind(const ParamSet& params, const std::string& prefix,
                          std::size_t input_dim) {
  ConvStack stack;
  stack.shape_ = ConvShape::for_input(input_dim);
  stack.conv1_w_ =
      params.require(prefix + ".conv1.weight", {kConv1Filters, 1, kKernelSize});
  stack.conv1_b_ = params.require(prefix + ".conv1.bias", {kConv1Filters});
  stack.conv2_w_ = params.require(prefix + ".conv2.weight",
                                  {kConv2Filters, kConv1Filters, kKernelSize});
  stack.conv2_b_ = params.require(prefix + ".conv2.bias", {kConv2Filters});
  return stack;
}

std::vector<double> ConvStack::forward(const ParamSet& params,
                                       std::span<const double> x,
                                       ConvStackCache* cache) const {
  if (x.size() != shape_.input) {
    throw ShapeError("conv stack expects width " +
                     std::to_string(shape_.input) + ", got " +
                     std::to_string(x.size()));
  }
  const Tensor seq({1, x.size()}, std::vector<double>(x.begin(), x.end()));
  Tensor c1 = nn::conv1d_forward(seq, params.value(conv1_w_),
                                 params.value(conv1_b_).data());
  nn::relu_inplace(c1.data());
  nn::PoolResult p1 = nn::maxpool1d(c1);
  Tensor c2 = nn::conv1d_forward(p1.out, params.value(conv2_w_),
                                 params.value(conv2_b_).data());
  nn::relu_inplace(c2.data());
  nn::PoolResult p2 = nn::maxpool1d(c2);
  std::vector<double> flat = p2.out.vec();
  if (cache) {
    cache->conv1 = std::move(c1);
    cache->pool1 = std::move(p1);
    cache->conv2 = std::move(c2);
    cache->pool2 = std::move(p2);
  }
  return flat;
}

void ConvStack::backward(const ParamSet& params, std::span<const double> x,
                         const ConvStackCache& cache,
                         std::span<const double> dflat, GradBuffer& grads,
                         std::span<double> dx) const {
  const Tensor dp2({kConv2Filters, shape_.pool2},
                   std::vector<double>(dflat.begin(), dflat.end()));
  Tensor dc2(cache.conv2.dims());
  nn::maxpool1d_backward(cache.pool2, dp2, dc2);
  nn::relu_backward(cache.conv2.data(), dc2.data());

  Tensor dp1(cache.pool1.out.dims());
  nn::conv1d_backward(cache.pool1.out, params.value(conv2_w_), dc2,
                      grads[conv2_w_], grads[conv2_b_].data(), &dp1);

  Tensor dc1(cache.conv1.dims());
  nn::maxpool1d_backward(cache.pool1, dp1, dc1);
  nn::relu_backward(cache.conv1.data(), dc1.data());

  const Tensor seq({1, x.size()}, std::vector<double>(x.begin(), x.end()));
  if (dx.empty()) {
    nn::conv1d_backward(seq, params.value(conv1_w_), dc1, grads[conv1_w_],
                        grads[conv1_b_].data(), nullptr);
  } else {
    Tensor dseq(seq.dims());
    nn::conv1d_backward(seq, params.value(conv1_w_), dc1, grads[conv1_w_],
                        grads[conv1_b_].data(), &dseq);
    axpy(1.0, dseq.data(), dx);
  }
}

Encoder Encoder::create(ParamSet& params, std::size_t input_dim, Rng& rng,
                        const std::string& prefix) {
  Encoder enc;
  enc.conv_ = ConvStack::create(params, prefix, input_dim, rng);
  const std::size_t flat = enc.conv_.shape().flat;
  enc.proj_w_ = params.add(prefix + ".proj.weight",
                           glorot_uniform({kLatentDim, flat}, flat, kLatentDim,
                                          rng));
  enc.proj_b_ = params.add(prefix + ".proj.bias", Tensor({kLatentDim}));
  return enc;
}

Encoder Encoder::bind(const ParamSet& params, std::size_t input_dim,
                      const std::string& prefix) {
  Encoder enc;
  enc.conv_ = ConvStack::bind(params, prefix, input_dim);
  enc.proj_w_ =
      params.require(prefix + ".proj.weight", {kLatentDim, enc.shape().flat});
  enc.proj_b_ = params.require(prefix + ".proj.bias", {kLatentDim});
  return enc;
}

std::vector<double> Encoder::forward(const ParamSet& params,
                                     std::span<const double> z0,
                                     EncoderCache* cache) const {
  ConvStackCache local;
  ConvStackCache* conv_cache = cache ? &cache->conv : &local;
  std::vector<double> flat = conv_.forward(params, z0, conv_cache);
  std::vector<double> z = nn::dense_forward(flat, params.value(proj_w_),
                                            params.value(proj_b_).data());
  if (cache) cache->flat = std::move(flat);
  return z;
}

void Encoder::backward(const ParamSet& params, std::span<const double> z0,
                       const EncoderCache& cache, std::span<const double> dz,
                       GradBuffer& grads, std::span<double> dz0) const {
  std::vector<double> dflat(cache.flat.size(), 0.0);
  nn::dense_backward(cache.flat, params.value(proj_w_), dz, grads[proj_w_],
                     grads[proj_b_].data(), dflat);
  conv_.backward(params, z0, cache.conv, dflat, grads, dz0);
}

}  // namespace sgnl
