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

#include <cmath>

#include "sgnl/bundle.hpp"
#include "sgnl/errors.hpp"
#include "sgnl/rng.hpp"

namespace sgnl {

EmbeddingBundle generate_synthetic(const SynthConfig& config) {
  if (config.classes == 0 || config.per_class == 0 || config.dim == 0 ||
      !(config.cluster_std > 0.0) || !(config.mean_radius > 0.0)) {
    throw ValidationError(
        "synthetic config needs positive classes, per_class, dim, "
        "cluster_std and mean_radius");
  }
  Rng rng(config.seed);

  std::vector<std::vector<double>> means(config.classes,
                                         std::vector<double>(config.dim));
  for (auto& mean : means) {
    double norm2 = 0.0;
    while (norm2 == 0.0) {
      for (double& v : mean) {
        v = rng.normal();
        norm2 += v * v;
      }
    }
    const double scale = config.mean_radius / std::sqrt(norm2);
    for (double& v : mean) v *= scale;
  }

  EmbeddingBundle bundle;
  bundle.dim = static_cast<std::uint32_t>(config.dim);
  bundle.vectors.reserve(config.classes * config.per_class * config.dim);
  auto& train = bundle.splits["train"];
  auto& dev = bundle.splits["dev"];
  auto& test = bundle.splits["test"];
  const std::size_t n_train = config.per_class * 6 / 10;
  const std::size_t n_dev = config.per_class * 2 / 10;

  for (std::size_t c = 0; c < config.classes; ++c) {
    bundle.label_names.push_back("gen" + std::to_string(c));
    for (std::size_t i = 0; i < config.per_class; ++i) {
      const auto record = static_cast<std::uint32_t>(bundle.label_ids.size());
      for (std::size_t d = 0; d < config.dim; ++d) {
        bundle.vectors.push_back(static_cast<float>(
            means[c][d] + config.cluster_std * rng.normal()));
      }
      bundle.label_ids.push_back(static_cast<std::int32_t>(c));
      if (i < n_train) {
        train.push_back(record);
      } else if (i < n_train + n_dev) {
        dev.push_back(record);
      } else {
        test.push_back(record);
      }
    }
  }
  return bundle;
}

}  // namespace sgnl
