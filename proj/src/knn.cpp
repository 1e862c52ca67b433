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

#include "sgnl/knn.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "sgnl/errors.hpp"

namespace sgnl {

KnnIndex KnnIndex::fit(Tensor latents, std::vector<std::size_t> labels,
                       std::size_t classes, std::size_t k, double eps) {
  if (latents.rank() != 2 || latents.rows() == 0 || latents.cols() == 0) {
    throw ValidationError("KNN fit needs a non-empty [M x d] latent matrix");
  }
  if (labels.size() != latents.rows()) {
    throw ValidationError("KNN fit: " + std::to_string(latents.rows()) +
                          " latents but " + std::to_string(labels.size()) +
                          " labels");
  }
  if (k == 0 || k > labels.size()) {
    throw ValidationError("KNN fit: K=" + std::to_string(k) +
                          " must lie in [1, " + std::to_string(labels.size()) +
                          "]");
  }
  if (!(eps > 0.0)) throw ValidationError("KNN fit: epsilon must be positive");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= classes) {
      throw ValidationError("KNN fit: label " + std::to_string(labels[i]) +
                            " of record " + std::to_string(i) +
                            " outside [0, " + std::to_string(classes) + ")");
    }
  }
  if (!latents.all_finite()) {
    throw ValidationError("KNN fit: latents contain NaN/Inf");
  }
  KnnIndex index;
  index.latents_ = std::move(latents);
  index.labels_ = std::move(labels);
  index.classes_ = classes;
  index.k_ = k;
  index.eps_ = eps;
  return index;
}

std::vector<double> KnnIndex::predict(std::span<const double> z) const {
  if (z.size() != dim()) {
    throw ShapeError("KNN query width " + std::to_string(z.size()) +
                     " differs from index width " + std::to_string(dim()));
  }
  std::vector<std::pair<double, std::size_t>> dist(size());
  for (std::size_t j = 0; j < size(); ++j) {
    const auto row = latents_.row(j);
    double d2 = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) {
      const double diff = z[i] - row[i];
      d2 += diff * diff;
    }
    dist[j] = {d2, j};
  }
  // Lexicographic pair order breaks distance ties by lower record index.
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k_),
                    dist.end());

  std::vector<double> p(classes_, 0.0);
  double total = 0.0;
  for (std::size_t n = 0; n < k_; ++n) {
    const double w = 1.0 / (dist[n].first + eps_);
    p[labels_[dist[n].second]] += w;
    total += w;
  }
  for (double& v : p) v /= total;
  return p;
}

}  // namespace sgnl
