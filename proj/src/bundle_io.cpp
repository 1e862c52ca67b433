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
#include <limits>
#include <set>

#include "json.hpp"

#include "sgnl/binary_io.hpp"
#include "sgnl/bundle.hpp"
#include "sgnl/errors.hpp"

namespace sgnl {

namespace {

using json = nlohmann::json;
using Kind = FormatError::Kind;

constexpr std::string_view kEmbeddingsMagic = "SGE1";
constexpr std::string_view kLabelsMagic = "SGL1";
constexpr int kManifestVersion = 1;

void check_magic(io::ByteReader& in, std::string_view magic) {
  in.need(4, "magic");
  const std::string got = in.bytes(4);
  if (got != magic) {
    throw FormatError(Kind::kBadMagic, in.source() + ": bad magic, expected '" +
                                           std::string(magic) + "'");
  }
}

// Shared by validate() (ValidationError) and read_bundle() (FormatError).
template <typename Fail>
void check_invariants(const EmbeddingBundle& b, Fail&& fail) {
  if (b.dim == 0) fail(Kind::kInconsistent, "embedding dim must be positive");
  if (b.vectors.size() != b.count() * b.dim) {
    fail(Kind::kInconsistent,
         "vector payload holds " + std::to_string(b.vectors.size()) +
             " values, expected count*dim = " +
             std::to_string(b.count() * b.dim));
  }
  for (std::size_t i = 0; i < b.vectors.size(); ++i) {
    if (!std::isfinite(b.vectors[i])) {
      fail(Kind::kNonFinite, "non-finite value in record " +
                                 std::to_string(i / b.dim));
    }
  }
  for (std::size_t i = 0; i < b.count(); ++i) {
    const std::int32_t id = b.label_ids[i];
    if (id != kUnlabeled &&
        (id < 0 || static_cast<std::size_t>(id) >= b.label_names.size())) {
      fail(Kind::kLabelOutOfRange,
           "record " + std::to_string(i) + " has label id " +
               std::to_string(id) + " but only " +
               std::to_string(b.label_names.size()) + " label names exist");
    }
  }
  std::set<std::uint32_t> seen;
  for (const auto& [name, indices] : b.splits) {
    for (std::uint32_t idx : indices) {
      if (idx >= b.count()) {
        fail(Kind::kDanglingSplit, "split '" + name + "' references record " +
                                       std::to_string(idx) + " of " +
                                       std::to_string(b.count()));
      }
      if (!seen.insert(idx).second) {
        fail(Kind::kDanglingSplit, "record " + std::to_string(idx) +
                                       " appears in more than one split slot "
                                       "(splits must be disjoint)");
      }
    }
  }
}

}  // namespace

void EmbeddingBundle::validate() const {
  check_invariants(*this, [](Kind, const std::string& msg) {
    throw ValidationError("invalid bundle: " + msg);
  });
}

void write_bundle(const EmbeddingBundle& bundle,
                  const std::filesystem::path& dir) {
  bundle.validate();
  constexpr auto kMax = std::numeric_limits<std::uint32_t>::max();
  if (bundle.count() > kMax) {
    throw FormatError(Kind::kOverflow, "record count " +
                                           std::to_string(bundle.count()) +
                                           " does not fit a 32-bit field");
  }
  const auto count = static_cast<std::uint32_t>(bundle.count());

  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  io::ByteWriter emb;
  emb.bytes(kEmbeddingsMagic);
  emb.u32(bundle.dim);
  emb.u32(count);
  for (float v : bundle.vectors) emb.f32(v);
  io::write_file(dir / "embeddings.bin", emb.buffer());

  io::ByteWriter labels;
  labels.bytes(kLabelsMagic);
  labels.u32(count);
  for (std::int32_t id : bundle.label_ids) labels.i32(id);
  io::write_file(dir / "labels.bin", labels.buffer());

  json manifest;
  manifest["version"] = kManifestVersion;
  manifest["label_names"] = bundle.label_names;
  manifest["splits"] = json::object();
  for (const auto& [name, indices] : bundle.splits) {
    manifest["splits"][name] = indices;
  }
  io::write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

EmbeddingBundle read_bundle(const std::filesystem::path& dir) {
  EmbeddingBundle bundle;

  const auto emb_path = dir / "embeddings.bin";
  const auto emb_bytes = io::read_file(emb_path);
  io::ByteReader emb(emb_bytes, emb_path.string());
  check_magic(emb, kEmbeddingsMagic);
  bundle.dim = emb.u32();
  const std::uint32_t count = emb.u32();
  const std::uint64_t payload = std::uint64_t{count} * bundle.dim * 4;
  if (emb.remaining() != payload) {
    throw FormatError(
        emb.remaining() < payload ? Kind::kTruncated : Kind::kInconsistent,
        emb.source() + ": payload size mismatch: expected " +
            std::to_string(12 + payload) + " bytes for dim=" +
            std::to_string(bundle.dim) + " count=" + std::to_string(count) +
            ", file has " + std::to_string(emb_bytes.size()));
  }
  bundle.vectors.resize(std::size_t{count} * bundle.dim);
  for (float& v : bundle.vectors) v = emb.f32();

  const auto lab_path = dir / "labels.bin";
  const auto lab_bytes = io::read_file(lab_path);
  io::ByteReader lab(lab_bytes, lab_path.string());
  check_magic(lab, kLabelsMagic);
  const std::uint32_t label_count = lab.u32();
  if (label_count != count) {
    throw FormatError(Kind::kInconsistent,
                      lab.source() + ": holds " + std::to_string(label_count) +
                          " labels but embeddings.bin holds " +
                          std::to_string(count) + " records");
  }
  if (lab.remaining() != std::uint64_t{count} * 4) {
    throw FormatError(
        lab.remaining() < std::uint64_t{count} * 4 ? Kind::kTruncated
                                                   : Kind::kInconsistent,
        lab.source() + ": payload size mismatch: expected " +
            std::to_string(8 + std::uint64_t{count} * 4) + " bytes, file has " +
            std::to_string(lab_bytes.size()));
  }
  bundle.label_ids.resize(count);
  for (auto& id : bundle.label_ids) id = lab.i32();

  const auto man_path = dir / "manifest.json";
  const auto man_bytes = io::read_file(man_path);
  json manifest;
  try {
    manifest = json::parse(man_bytes.begin(), man_bytes.end());
    if (!manifest.is_object() || !manifest.contains("version")) {
      throw FormatError(Kind::kBadManifest,
                        man_path.string() + ": missing \"version\"");
    }
    if (manifest.at("version").get<int>() != kManifestVersion) {
      throw FormatError(Kind::kBadVersion,
                        man_path.string() + ": unsupported version " +
                            manifest.at("version").dump());
    }
    bundle.label_names =
        manifest.at("label_names").get<std::vector<std::string>>();
    for (const auto& [name, indices] : manifest.at("splits").items()) {
      bundle.splits[name] = indices.get<std::vector<std::uint32_t>>();
    }
  } catch (const json::exception& e) {
    throw FormatError(Kind::kBadManifest,
                      man_path.string() + ": " + std::string(e.what()));
  }

  check_invariants(bundle, [&](Kind kind, const std::string& msg) {
    throw FormatError(kind, dir.string() + ": " + msg);
  });
  return bundle;
}

}  // namespace sgnl
