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

#include "sgnl/checkpoint.hpp"

#include <limits>
#include <set>

#include "sgnl/binary_io.hpp"
#include "sgnl/errors.hpp"

namespace sgnl {

namespace {

using Kind = FormatError::Kind;
constexpr std::string_view kMagic = "SGM1";

void check_unique(const std::vector<NamedTensor>& tensors,
                  const std::string& source) {
  std::set<std::string> names;
  for (const auto& t : tensors) {
    if (!names.insert(t.name).second) {
      throw FormatError(Kind::kDuplicateTensor,
                        source + ": duplicate tensor name '" + t.name + "'");
    }
  }
}

}  // namespace

const Tensor* Checkpoint::find(const std::string& name) const {
  for (const auto& t : tensors) {
    if (t.name == name) return &t.tensor;
  }
  return nullptr;
}

const Tensor& Checkpoint::at(const std::string& name) const {
  if (const Tensor* t = find(name)) return *t;
  throw FormatError(Kind::kInconsistent,
                    "checkpoint has no tensor named '" + name + "'");
}

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& checkpoint) {
  check_unique(checkpoint.tensors, "checkpoint");
  constexpr auto kU32 = std::numeric_limits<std::uint32_t>::max();
  io::ByteWriter out;
  out.bytes(kMagic);
  out.u32(kCheckpointVersion);
  out.u32(static_cast<std::uint32_t>(checkpoint.tensors.size()));
  for (const auto& [name, tensor] : checkpoint.tensors) {
    if (name.size() > std::numeric_limits<std::uint16_t>::max() ||
        tensor.rank() > std::numeric_limits<std::uint8_t>::max()) {
      throw FormatError(Kind::kOverflow,
                        "tensor '" + name + "' name or rank too large");
    }
    out.u16(static_cast<std::uint16_t>(name.size()));
    out.bytes(name);
    out.u8(static_cast<std::uint8_t>(tensor.rank()));
    for (std::size_t d : tensor.dims()) {
      if (d > kU32) {
        throw FormatError(Kind::kOverflow,
                          "tensor '" + name + "' dimension exceeds 32 bits");
      }
      out.u32(static_cast<std::uint32_t>(d));
    }
    for (double v : tensor.data()) out.f64(v);
  }
  const std::string config = checkpoint.config.dump();
  out.u32(static_cast<std::uint32_t>(config.size()));
  out.bytes(config);
  return out.buffer();
}

Checkpoint decode_checkpoint(const std::vector<std::uint8_t>& bytes,
                             const std::string& source) {
  io::ByteReader in(bytes, source);
  in.need(4, "magic");
  if (in.bytes(4) != kMagic) {
    throw FormatError(Kind::kBadMagic,
                      source + ": bad magic, expected 'SGM1'");
  }
  const std::uint32_t version = in.u32();
  if (version != kCheckpointVersion) {
    throw FormatError(Kind::kBadVersion,
                      source + ": checkpoint version " +
                          std::to_string(version) + ", this reader supports " +
                          std::to_string(kCheckpointVersion));
  }
  Checkpoint checkpoint;
  const std::uint32_t count = in.u32();
  for (std::uint32_t i = 0; i < count; ++i) {
    NamedTensor nt;
    nt.name = in.bytes(in.u16());
    const std::uint8_t rank = in.u8();
    std::vector<std::size_t> dims(rank);
    std::uint64_t total = 1;
    bool has_zero = false;
    for (auto& d : dims) {
      d = in.u32();
      if (d == 0) {
        has_zero = true;
      } else if (total > std::numeric_limits<std::uint64_t>::max() / d) {
        total = std::numeric_limits<std::uint64_t>::max();
      } else {
        total *= d;
      }
    }
    if (has_zero) total = 0;
    if (total > in.remaining() / 8) {
      throw FormatError(Kind::kTruncated,
                        source + ": tensor '" + nt.name + "' dims " +
                            shape_string(dims) + " need " +
                            std::to_string(total) + " x 8 bytes but only " +
                            std::to_string(in.remaining()) +
                            " bytes remain");
    }
    in.need(total * 8, "tensor '" + nt.name + "' data");
    std::vector<double> data(total);
    for (double& v : data) v = in.f64();
    nt.tensor = Tensor(std::move(dims), std::move(data));
    checkpoint.tensors.push_back(std::move(nt));
  }
  check_unique(checkpoint.tensors, source);
  const std::string config = in.bytes(in.u32());
  if (in.remaining() != 0) {
    throw FormatError(Kind::kInconsistent,
                      source + ": " + std::to_string(in.remaining()) +
                          " trailing bytes after config");
  }
  try {
    checkpoint.config = nlohmann::json::parse(config);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(Kind::kBadManifest,
                      source + ": config is not valid JSON: " + e.what());
  }
  return checkpoint;
}

void save_checkpoint(const Checkpoint& checkpoint,
                     const std::filesystem::path& path) {
  const auto bytes = encode_checkpoint(checkpoint);
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw IoError("cannot create " + path.parent_path().string() + ": " +
                    ec.message());
    }
  }
  io::write_file(path, bytes);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint(io::read_file(path), path.string());
}

}  // namespace sgnl
