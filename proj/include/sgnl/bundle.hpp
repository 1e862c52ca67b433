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
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace sgnl {

/// Label id reserved for records without a known class.
inline constexpr std::int32_t kUnlabeled = -1;

/// Fixed-length utterance embeddings with labels and split assignments.
///
/// On disk a bundle is a directory holding three files, all little-endian:
///   embeddings.bin  "SGE1", u32 dim, u32 count, count·dim f32 (row-major)
///   labels.bin      "SGL1", u32 count, count i32 label ids
///   manifest.json   {"version": 1, "label_names": [...], "splits": {...}}
struct EmbeddingBundle {
  std::uint32_t dim = 0;
  std::vector<float> vectors;  // count × dim
  std::vector<std::int32_t> label_ids;
  std::vector<std::string> label_names;
  std::map<std::string, std::vector<std::uint32_t>> splits;

  std::size_t count() const noexcept { return label_ids.size(); }
  std::span<const float> vector(std::size_t record) const {
    return std::span<const float>(vectors).subspan(record * dim, dim);
  }
  /// Throws ValidationError naming the first broken invariant.
  void validate() const;

  friend bool operator==(const EmbeddingBundle&,
                         const EmbeddingBundle&) = default;
};

void write_bundle(const EmbeddingBundle& bundle,
                  const std::filesystem::path& dir);
EmbeddingBundle read_bundle(const std::filesystem::path& dir);

/// Parameters of the Gaussian-cluster generator used for desk-scale runs.
struct SynthConfig {
  std::size_t classes = 2;
  std::size_t per_class = 10;
  std::size_t dim = 16;
  double cluster_std = 0.3;
  double mean_radius = 5.0;
  std::uint64_t seed = 0;
};

/// Class means are Gaussian directions scaled to mean_radius; each sample is
/// its class mean plus isotropic N(0, cluster_std²) noise. Records are
/// class-major; within each class the first 60% go to "train", the next 20%
/// to "dev", the rest to "test". A pure function of the config.
EmbeddingBundle generate_synthetic(const SynthConfig& config);

}  // namespace sgnl
