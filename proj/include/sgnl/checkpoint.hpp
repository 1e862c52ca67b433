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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "sgnl/tensor.hpp"

namespace sgnl {

struct NamedTensor {
  std::string name;
  Tensor tensor;

  friend bool operator==(const NamedTensor&, const NamedTensor&) = default;
};

/// Serialized model state: an ordered table of named f64 tensors plus a JSON
/// configuration record.
///
/// Layout (little-endian):
///   "SGM1", u32 version (=1), u32 tensor count,
///   per tensor: u16 name length, UTF-8 name, u8 rank, rank × u32 dims,
///               product(dims) × f64,
///   u32 config length, UTF-8 JSON config.
struct Checkpoint {
  std::vector<NamedTensor> tensors;
  nlohmann::json config = nlohmann::json::object();

  const Tensor* find(const std::string& name) const;
  /// Throws FormatError when absent.
  const Tensor& at(const std::string& name) const;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const Checkpoint& checkpoint,
                     const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// In-memory encoding used by save_checkpoint (exposed for fixtures/tests).
std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& checkpoint);
Checkpoint decode_checkpoint(const std::vector<std::uint8_t>& bytes,
                             const std::string& source);

}  // namespace sgnl
