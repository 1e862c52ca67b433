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

#include "sgnl/nn.hpp"

#include <algorithm>
#include <cmath>

#include "sgnl/errors.hpp"

namespace sgnl::nn {

std::vector<double> dense_forward(std::span<const double> x, const Tensor& w,
                                  std::span<const double> b) {
  if (w.rank() != 2 || w.cols() != x.size() || b.size() != w.rows()) {
    throw ShapeError("dense: weight " + shape_string(w.dims()) + ", input " +
                     std::to_string(x.size()) + ", bias " +
                     std::to_string(b.size()));
  }
  std::vector<double> y(w.rows());
  for (std::size_t r = 0; r < w.rows(); ++r) y[r] = b[r] + dot(w.row(r), x);
  return y;
}

void dense_backward(std::span<const double> x, const Tensor& w,
                    std::span<const double> dy, Tensor& dw,
                    std::span<double> db, std::span<double> dx) {
  for (std::size_t r = 0; r < w.rows(); ++r) {
    const double g = dy[r];
    if (g == 0.0) continue;
    axpy(g, x, dw.row(r));
    db[r] += g;
    if (!dx.empty()) axpy(g, w.row(r), dx);
  }
}

Tensor conv1d_forward(const Tensor& x, const Tensor& kernels,
                      std::span<const double> bias) {
  if (x.rank() != 2 || kernels.rank() != 3 || kernels.dim(1) != x.rows() ||
      bias.size() != kernels.dim(0)) {
    throw ShapeError("conv1d: input " + shape_string(x.dims()) + ", kernels " +
                     shape_string(kernels.dims()) + ", bias " +
                     std::to_string(bias.size()));
  }
  const std::size_t c_out = kernels.dim(0);
  const std::size_t c_in = kernels.dim(1);
  const std::size_t k = kernels.dim(2);
  const std::size_t len = x.cols();
  if (len < k) {
    throw ShapeError("conv1d: sequence length " + std::to_string(len) +
                     " shorter than kernel " + std::to_string(k));
  }
  const std::size_t out_len = len - k + 1;
  Tensor y = Tensor::matrix(c_out, out_len);
  const double* kd = kernels.data().data();
  for (std::size_t c = 0; c < c_out; ++c) {
    double* out = y.row(c).data();
    std::fill(out, out + out_len, bias[c]);
    for (std::size_t i = 0; i < c_in; ++i) {
      const double* in = x.row(i).data();
      const double* w = kd + (c * c_in + i) * k;
      if (k == 3) {
        for (std::size_t t = 0; t < out_len; ++t) {
          out[t] += w[0] * in[t] + w[1] * in[t + 1] + w[2] * in[t + 2];
        }
        continue;
      }
      for (std::size_t j = 0; j < k; ++j) {
        const double* src = in + j;
        for (std::size_t t = 0; t < out_len; ++t) out[t] += w[j] * src[t];
      }
    }
  }
  return y;
}

void conv1d_backward(const Tensor& x, const Tensor& kernels, const Tensor& dy,
                     Tensor& dkernels, std::span<double> dbias, Tensor* dx) {
  const std::size_t c_out = kernels.dim(0);
  const std::size_t c_in = kernels.dim(1);
  const std::size_t k = kernels.dim(2);
  const std::size_t out_len = dy.cols();
  const double* kd = kernels.data().data();
  double* dkd = dkernels.data().data();
  for (std::size_t c = 0; c < c_out; ++c) {
    const double* g = dy.row(c).data();
    double bias_grad = 0.0;
    for (std::size_t t = 0; t < out_len; ++t) bias_grad += g[t];
    dbias[c] += bias_grad;
    for (std::size_t i = 0; i < c_in; ++i) {
      const double* in = x.row(i).data();
      double* din = dx ? dx->row(i).data() : nullptr;
      for (std::size_t j = 0; j < k; ++j) {
        const std::size_t widx = (c * c_in + i) * k + j;
        const double* src = in + j;
        dkd[widx] += dot(std::span<const double>(g, out_len),
                         std::span<const double>(src, out_len));
        if (din && k != 3) {
          const double w = kd[widx];
          double* dst = din + j;
          for (std::size_t t = 0; t < out_len; ++t) dst[t] += w * g[t];
        }
      }
      if (din && k == 3) {
        // din[u] += Σⱼ w[j]·g[u−j]; interior first, then the two edges.
        const double* w = kd + (c * c_in + i) * k;
        for (std::size_t u = 2; u < out_len; ++u) {
          din[u] += w[0] * g[u] + w[1] * g[u - 1] + w[2] * g[u - 2];
        }
        din[0] += w[0] * g[0];
        if (out_len > 1) din[1] += w[0] * g[1] + w[1] * g[0];
        din[out_len] += w[1] * g[out_len - 1] +
                        (out_len > 1 ? w[2] * g[out_len - 2] : 0.0);
        din[out_len + 1] += w[2] * g[out_len - 1];
      }
    }
  }
}

PoolResult maxpool1d(const Tensor& x) {
  if (x.rank() != 2 || x.cols() < 2) {
    throw ShapeError("maxpool1d: need [C x L] with L >= 2, got " +
                     shape_string(x.dims()));
  }
  const std::size_t channels = x.rows();
  const std::size_t out_len = x.cols() / 2;
  PoolResult result{Tensor::matrix(channels, out_len), {}};
  result.argmax.resize(channels * out_len);
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t t = 0; t < out_len; ++t) {
      const std::size_t a = c * x.cols() + 2 * t;
      // Strict comparison keeps the first index on ties.
      const std::size_t best = x[a + 1] > x[a] ? a + 1 : a;
      result.out.at(c, t) = x[best];
      result.argmax[c * out_len + t] = best;
    }
  }
  return result;
}

void maxpool1d_backward(const PoolResult& pooled, const Tensor& dy,
                        Tensor& dx) {
  for (std::size_t i = 0; i < pooled.argmax.size(); ++i) {
    dx[pooled.argmax[i]] += dy[i];
  }
}

void relu_inplace(std::span<double> x) {
  for (double& v : x) v = v > 0.0 ? v : 0.0;
}

void relu_backward(std::span<const double> y, std::span<double> dy) {
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(y[i] > 0.0)) dy[i] = 0.0;
  }
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> p(logits.begin(), logits.end());
  if (p.empty()) return p;
  const double top = *std::max_element(p.begin(), p.end());
  double sum = 0.0;
  for (double& v : p) {
    v = std::exp(v - top);
    sum += v;
  }
  for (double& v : p) v /= sum;
  return p;
}

std::vector<double> softmax_backward(std::span<const double> p,
                                     std::span<const double> dp) {
  const double inner = dot(p, dp);
  std::vector<double> dlogits(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) dlogits[i] = p[i] * (dp[i] - inner);
  return dlogits;
}

}  // namespace sgnl::nn
