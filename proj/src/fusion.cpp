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

#include "sgnl/fusion.hpp"

#include <cmath>

#include "sgnl/errors.hpp"
#include "sgnl/knn.hpp"
#include "sgnl/model.hpp"

namespace sgnl {

namespace {

void require_simplex(std::span<const double> p, const char* what) {
  double total = 0.0;
  for (double v : p) {
    if (!(v >= -1e-6)) {
      throw ValidationError(std::string(what) + " has a negative entry");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-6) {
    throw ValidationError(std::string(what) + " is not on the simplex (sum " +
                          std::to_string(total) + ")");
  }
}

}  // namespace

void FusionConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ValidationError("alpha must lie in [0, 1], got " +
                          std::to_string(alpha));
  }
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw ValidationError("tau must lie in [0, 1], got " + std::to_string(tau));
  }
  if (entropy_routing && !(entropy_tau >= 0.0)) {
    throw ValidationError("entropy threshold must be non-negative");
  }
}

std::vector<double> fuse(std::span<const double> p_gnn,
                         std::span<const double> p_knn, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ValidationError("alpha must lie in [0, 1], got " +
                          std::to_string(alpha));
  }
  if (p_gnn.size() != p_knn.size()) {
    throw ValidationError("fuse: branch widths differ (" +
                          std::to_string(p_gnn.size()) + " vs " +
                          std::to_string(p_knn.size()) + ")");
  }
  require_simplex(p_gnn, "p_gnn");
  require_simplex(p_knn, "p_knn");
  std::vector<double> out(p_gnn.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = alpha * p_gnn[i] + (1.0 - alpha) * p_knn[i];
  }
  return out;
}

std::size_t argmax(std::span<const double> p) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (p[i] > p[best]) best = i;
  }
  return best;
}

Decision route(std::span<const double> p_ens, double entropy,
               const FusionConfig& config) {
  const std::size_t top = argmax(p_ens);
  if (p_ens[top] < config.tau) return Decision::unseen();
  if (config.entropy_routing && entropy > config.entropy_tau) {
    return Decision::unseen();
  }
  return Decision::seen(top);
}

Prediction predict(std::span<const double> z0, const SignalModel& model,
                   const KnnIndex& index, const FusionConfig& config) {
  config.validate();
  if (index.classes() != model.config().classes) {
    throw ValidationError("KNN index covers " +
                          std::to_string(index.classes()) +
                          " classes but the model has " +
                          std::to_string(model.config().classes));
  }
  const std::vector<double> z = model.encode(z0);
  GnnOutput g = model.gnn().forward(model.params(), z);
  Prediction pred;
  pred.p_knn = index.predict(z);
  pred.p_gnn = std::move(g.p);
  pred.entropy = g.entropy;
  pred.p_ens = fuse(pred.p_gnn, pred.p_knn, config.alpha);
  pred.max_conf = pred.p_ens[argmax(pred.p_ens)];
  pred.decision = route(pred.p_ens, pred.entropy, config);
  return pred;
}

}  // namespace sgnl
