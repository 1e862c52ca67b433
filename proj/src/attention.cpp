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

#include "sgnl/attention.hpp"

#include <cmath>

#include "sgnl/errors.hpp"
#include "sgnl/nn.hpp"

namespace sgnl::nn {

namespace {

void check_shapes(const Tensor& x, const MhaWeights& w) {
  if (x.rank() != 2 || x.rows() == 0 || w.heads == 0) {
    throw ShapeError("attention: need a non-empty [N x d] node matrix, got " +
                     shape_string(x.dims()));
  }
  const std::size_t d = x.cols();
  const std::size_t inner = w.wq.rank() == 2 ? w.wq.rows() : 0;
  const auto ok = [&](const Tensor& t, std::size_t r, std::size_t c) {
    return t.rank() == 2 && t.rows() == r && t.cols() == c;
  };
  if (inner == 0 || inner % w.heads != 0 || !ok(w.wq, inner, d) ||
      !ok(w.wk, inner, d) || !ok(w.wv, inner, d) || !ok(w.wo, d, inner)) {
    throw ShapeError("attention: projections q" + shape_string(w.wq.dims()) +
                     " k" + shape_string(w.wk.dims()) + " v" +
                     shape_string(w.wv.dims()) + " o" +
                     shape_string(w.wo.dims()) + " do not fit " +
                     std::to_string(w.heads) + " heads over width " +
                     std::to_string(d));
  }
}

}  // namespace

Tensor mha_forward(const Tensor& x, const MhaWeights& w, MhaCache* cache) {
  check_shapes(x, w);
  const std::size_t n = x.rows();
  const std::size_t inner = w.wq.rows();
  const std::size_t head_dim = inner / w.heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));

  Tensor q = matmul_bt(x, w.wq);
  Tensor k = matmul_bt(x, w.wk);
  Tensor v = matmul_bt(x, w.wv);
  Tensor mixed = Tensor::matrix(n, inner);
  std::vector<Tensor> attention;
  attention.reserve(w.heads);

  for (std::size_t h = 0; h < w.heads; ++h) {
    const std::size_t off = h * head_dim;
    Tensor a = Tensor::matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      auto qi = q.row(i).subspan(off, head_dim);
      std::vector<double> scores(n);
      for (std::size_t j = 0; j < n; ++j) {
        scores[j] = scale * dot(qi, k.row(j).subspan(off, head_dim));
      }
      const auto p = softmax(scores);
      auto out = mixed.row(i).subspan(off, head_dim);
      for (std::size_t j = 0; j < n; ++j) {
        a.at(i, j) = p[j];
        axpy(p[j], v.row(j).subspan(off, head_dim), out);
      }
    }
    attention.push_back(std::move(a));
  }

  Tensor y = matmul_bt(mixed, w.wo);
  if (cache) {
    cache->x = x;
    cache->q = std::move(q);
    cache->k = std::move(k);
    cache->v = std::move(v);
    cache->attention = std::move(attention);
    cache->mixed = std::move(mixed);
  }
  return y;
}

void mha_backward(const MhaCache& cache, const MhaWeights& w, const Tensor& dy,
                  MhaGrads grads, Tensor* dx) {
  const std::size_t n = cache.x.rows();
  const std::size_t inner = w.wq.rows();
  const std::size_t head_dim = inner / w.heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));

  // y = mixed · woᵀ
  const Tensor dwo = matmul_at(dy, cache.mixed);
  axpy(1.0, dwo.data(), grads.wo.data());
  const Tensor dmixed = matmul(dy, w.wo);

  Tensor dq = Tensor::matrix(n, inner);
  Tensor dk = Tensor::matrix(n, inner);
  Tensor dv = Tensor::matrix(n, inner);
  for (std::size_t h = 0; h < w.heads; ++h) {
    const std::size_t off = h * head_dim;
    const Tensor& a = cache.attention[h];
    for (std::size_t i = 0; i < n; ++i) {
      auto g_out = dmixed.row(i).subspan(off, head_dim);
      // dA[i, j] = <dOut_i, v_j>; dV_j += A[i, j] · dOut_i
      std::vector<double> da(n);
      for (std::size_t j = 0; j < n; ++j) {
        da[j] = dot(g_out, cache.v.row(j).subspan(off, head_dim));
        axpy(a.at(i, j), g_out, dv.row(j).subspan(off, head_dim));
      }
      const auto ds = softmax_backward(a.row(i), da);
      auto qi = cache.q.row(i).subspan(off, head_dim);
      auto dqi = dq.row(i).subspan(off, head_dim);
      for (std::size_t j = 0; j < n; ++j) {
        const double g = scale * ds[j];
        if (g == 0.0) continue;
        axpy(g, cache.k.row(j).subspan(off, head_dim), dqi);
        axpy(g, qi, dk.row(j).subspan(off, head_dim));
      }
    }
  }

  // q = x · wqᵀ  ⇒  dwq = dqᵀ · x,  dx = dq · wq  (same for k, v)
  axpy(1.0, matmul_at(dq, cache.x).data(), grads.wq.data());
  axpy(1.0, matmul_at(dk, cache.x).data(), grads.wk.data());
  axpy(1.0, matmul_at(dv, cache.x).data(), grads.wv.data());
  if (dx) {
    axpy(1.0, matmul(dq, w.wq).data(), dx->data());
    axpy(1.0, matmul(dk, w.wk).data(), dx->data());
    axpy(1.0, matmul(dv, w.wv).data(), dx->data());
  }
}

}  // namespace sgnl::nn
