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

#include "sgnl/gnn.hpp"

#include <cmath>
#include <numeric>

#include "sgnl/encoder.hpp"
#include "sgnl/errors.hpp"
#include "sgnl/nn.hpp"

namespace sgnl {

GnnHead GnnHead::create(ParamSet& params, std::size_t classes,
                        std::size_t dim, std::size_t heads, Rng& rng) {
  if (classes < 2) throw ValidationError("GNN head needs at least 2 classes");
  if (heads == 0 || dim % heads != 0) {
    throw ShapeError("latent width " + std::to_string(dim) +
                     " is not divisible by " + std::to_string(heads) +
                     " heads");
  }
  GnnHead head;
  head.classes_ = classes;
  head.dim_ = dim;
  head.heads_ = heads;
  Tensor protos({classes, dim});
  const double std_dev = 1.0 / std::sqrt(static_cast<double>(dim));
  for (double& v : protos.data()) v = std_dev * rng.normal();
  head.prototypes_ = params.add("gnn.prototypes", std::move(protos));
  head.ws_ = params.add("gnn.ws", glorot_uniform({dim, dim}, dim, dim, rng));
  head.wq_ =
      params.add("gnn.attn.wq", glorot_uniform({dim, dim}, dim, dim, rng));
  head.wk_ =
      params.add("gnn.attn.wk", glorot_uniform({dim, dim}, dim, dim, rng));
  head.wv_ =
      params.add("gnn.attn.wv", glorot_uniform({dim, dim}, dim, dim, rng));
  head.wo_ =
      params.add("gnn.attn.wo", glorot_uniform({dim, dim}, dim, dim, rng));
  head.logit_w_ =
      params.add("gnn.logit_w", glorot_uniform({dim}, dim, 1, rng));
  return head;
}

GnnHead GnnHead::bind(const ParamSet& params, std::size_t classes,
                      std::size_t dim, std::size_t heads) {
  if (heads == 0 || dim % heads != 0) {
    throw ShapeError("latent width " + std::to_string(dim) +
                     " is not divisible by " + std::to_string(heads) +
                     " heads");
  }
  GnnHead head;
  head.classes_ = classes;
  head.dim_ = dim;
  head.heads_ = heads;
  head.prototypes_ = params.require("gnn.prototypes", {classes, dim});
  head.ws_ = params.require("gnn.ws", {dim, dim});
  head.wq_ = params.require("gnn.attn.wq", {dim, dim});
  head.wk_ = params.require("gnn.attn.wk", {dim, dim});
  head.wv_ = params.require("gnn.attn.wv", {dim, dim});
  head.wo_ = params.require("gnn.attn.wo", {dim, dim});
  head.logit_w_ = params.require("gnn.logit_w", {dim});
  return head;
}

nn::MhaWeights GnnHead::mha_weights(const ParamSet& params) const {
  return {params.value(wq_), params.value(wk_), params.value(wv_),
          params.value(wo_), heads_};
}

GnnOutput GnnHead::forward(const ParamSet& params, std::span<const double> z,
                           GnnCache* cache) const {
  if (z.size() != dim_) {
    throw ShapeError("GNN head expects a latent of width " +
                     std::to_string(dim_) + ", got " +
                     std::to_string(z.size()));
  }
  const Tensor& protos = params.value(prototypes_);
  std::vector<double> s = nn::dense_forward(z, params.value(ws_),
                                            std::vector<double>(dim_, 0.0));
  Tensor nodes = protos;
  for (std::size_t i = 0; i < classes_; ++i) axpy(1.0, s, nodes.row(i));

  nn::MhaCache local;
  nn::MhaCache& mha_cache = cache ? cache->mha : local;
  Tensor refined = nn::mha_forward(nodes, mha_weights(params), &mha_cache);

  GnnOutput out;
  const auto w = params.value(logit_w_).data();
  out.logits.resize(classes_);
  for (std::size_t i = 0; i < classes_; ++i) {
    out.logits[i] = dot(w, refined.row(i));
  }
  out.p = nn::softmax(out.logits);
  out.entropy = attention_entropy(out.p);
  out.attention = mha_cache.attention;
  if (cache) {
    cache->s = std::move(s);
    cache->refined = std::move(refined);
    cache->p = out.p;
  }
  return out;
}

void GnnHead::backward(const ParamSet& params, std::span<const double> z,
                       const GnnCache& cache, std::span<const double> dlogits,
                       GradBuffer& grads, std::span<double> dz) const {
  const auto w = params.value(logit_w_).data();
  Tensor drefined({classes_, dim_});
  auto dw = grads[logit_w_].data();
  for (std::size_t i = 0; i < classes_; ++i) {
    axpy(dlogits[i], w, drefined.row(i));
    axpy(dlogits[i], cache.refined.row(i), dw);
  }

  Tensor dnodes({classes_, dim_});
  nn::mha_backward(cache.mha, mha_weights(params), drefined,
                   {grads[wq_], grads[wk_], grads[wv_], grads[wo_]}, &dnodes);

  // nodes = prototypes + 1·sᵀ
  axpy(1.0, dnodes.data(), grads[prototypes_].data());
  std::vector<double> ds(dim_, 0.0);
  for (std::size_t i = 0; i < classes_; ++i) axpy(1.0, dnodes.row(i), ds);
  std::vector<double> dbias_unused(dim_, 0.0);
  nn::dense_backward(z, params.value(ws_), ds, grads[ws_], dbias_unused, dz);
}

double attention_entropy(std::span<const double> p) {
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) {
      throw ValidationError("entropy input has a negative or NaN entry");
    }
    total += v;
  }
  if (p.empty() || std::abs(total - 1.0) > 1e-6) {
    throw ValidationError("entropy input is not on the simplex (sum " +
                          std::to_string(total) + ")");
  }
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

}  // namespace sgnl
