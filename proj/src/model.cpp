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

#include "sgnl/model.hpp"

#include "sgnl/errors.hpp"

namespace sgnl {

namespace {

using json = nlohmann::json;
using Kind = FormatError::Kind;

template <typename T>
T config_field(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError(Kind::kBadManifest,
                      std::string("checkpoint config field '") + key +
                          "': " + e.what());
  }
}

void append_params(const ParamSet& params, std::vector<NamedTensor>& out) {
  for (ParamId id = 0; id < params.size(); ++id) {
    out.push_back({params.name(id), params.value(id)});
  }
}

ParamSet params_with_prefix(const Checkpoint& checkpoint,
                            std::string_view prefix) {
  ParamSet params;
  for (const auto& [name, tensor] : checkpoint.tensors) {
    if (name.starts_with(prefix)) params.add(name, tensor);
  }
  return params;
}

}  // namespace

json ModelConfig::to_json() const {
  return json{{"N", classes},
              {"input_dim", input_dim},
              {"d", latent_dim},
              {"heads", heads},
              {"alpha", alpha},
              {"tau", tau},
              {"K", k},
              {"eps", eps},
              {"seen_class_ids", seen_class_ids},
              {"seen_class_names", seen_class_names}};
}

ModelConfig ModelConfig::from_json(const json& j) {
  ModelConfig c;
  c.classes = config_field<std::size_t>(j, "N");
  c.input_dim = config_field<std::size_t>(j, "input_dim");
  c.latent_dim = config_field<std::size_t>(j, "d");
  c.heads = config_field<std::size_t>(j, "heads");
  c.alpha = config_field<double>(j, "alpha");
  c.tau = config_field<double>(j, "tau");
  c.k = config_field<std::size_t>(j, "K");
  c.eps = config_field<double>(j, "eps");
  c.seen_class_ids = config_field<std::vector<std::int32_t>>(j, "seen_class_ids");
  c.seen_class_names =
      config_field<std::vector<std::string>>(j, "seen_class_names");
  if (c.seen_class_ids.size() != c.classes ||
      c.seen_class_names.size() != c.classes) {
    throw FormatError(Kind::kInconsistent,
                      "checkpoint config: N=" + std::to_string(c.classes) +
                          " but " + std::to_string(c.seen_class_ids.size()) +
                          " seen ids and " +
                          std::to_string(c.seen_class_names.size()) +
                          " seen names");
  }
  return c;
}

SignalModel::SignalModel(ModelConfig config, Rng& rng)
    : config_(std::move(config)),
      encoder_(Encoder::create(params_, config_.input_dim, rng)),
      gnn_(GnnHead::create(params_, config_.classes, config_.latent_dim,
                           config_.heads, rng)) {
  if (config_.latent_dim != kLatentDim) {
    throw ShapeError("the encoder emits width " + std::to_string(kLatentDim) +
                     "; latent_dim must match");
  }
}

SignalModel::SignalModel(ModelConfig config, ParamSet params)
    : config_(std::move(config)),
      params_(std::move(params)),
      encoder_(Encoder::bind(params_, config_.input_dim)),
      gnn_(GnnHead::bind(params_, config_.classes, config_.latent_dim,
                         config_.heads)) {}

Checkpoint to_checkpoint(const SignalModel& model, const KnnIndex& index) {
  Checkpoint ck;
  append_params(model.params(), ck.tensors);
  ck.tensors.push_back({"knn.latents", index.latents()});
  std::vector<double> labels(index.labels().begin(), index.labels().end());
  const std::size_t count = labels.size();
  ck.tensors.push_back({"knn.labels", Tensor({count}, std::move(labels))});
  ModelConfig cfg = model.config();
  cfg.k = index.k();
  cfg.eps = index.eps();
  ck.config = cfg.to_json();
  ck.config["model"] = "signal";
  return ck;
}

SignalBundle signal_from_checkpoint(const Checkpoint& checkpoint) {
  if (checkpoint_kind(checkpoint) != "signal") {
    throw FormatError(Kind::kInconsistent,
                      "checkpoint holds a '" + checkpoint_kind(checkpoint) +
                          "' model, not a signal model");
  }
  ModelConfig cfg = ModelConfig::from_json(checkpoint.config);
  const Tensor& protos = checkpoint.at("gnn.prototypes");
  if (protos.rank() != 2 || protos.rows() != cfg.classes) {
    throw FormatError(Kind::kInconsistent,
                      "checkpoint config N=" + std::to_string(cfg.classes) +
                          " but gnn.prototypes has shape " +
                          shape_string(protos.dims()));
  }
  ParamSet params;
  for (const auto& [name, tensor] : checkpoint.tensors) {
    if (name.starts_with("encoder.") || name.starts_with("gnn.")) {
      params.add(name, tensor);
    }
  }

  const Tensor& latents = checkpoint.at("knn.latents");
  const Tensor& label_values = checkpoint.at("knn.labels");
  if (latents.rank() != 2 || label_values.rank() != 1 ||
      latents.rows() != label_values.size()) {
    throw FormatError(Kind::kDimsMismatch,
                      "knn.latents " + shape_string(latents.dims()) +
                          " does not pair with knn.labels " +
                          shape_string(label_values.dims()));
  }
  std::vector<std::size_t> labels;
  labels.reserve(label_values.size());
  for (double v : label_values.data()) {
    if (!(v >= 0.0) || v != static_cast<double>(static_cast<std::size_t>(v))) {
      throw FormatError(Kind::kLabelOutOfRange,
                        "knn.labels holds a non-integral or negative id");
    }
    labels.push_back(static_cast<std::size_t>(v));
  }
  KnnIndex index;
  try {
    index = KnnIndex::fit(latents, std::move(labels), cfg.classes, cfg.k,
                          cfg.eps);
  } catch (const ValidationError& e) {
    throw FormatError(Kind::kInconsistent,
                      std::string("stored KNN index: ") + e.what());
  }
  return {SignalModel(std::move(cfg), std::move(params)), std::move(index)};
}

Checkpoint to_checkpoint(const BaselineModel& model, const ModelConfig& config) {
  Checkpoint ck;
  append_params(model.params(), ck.tensors);
  ck.config = config.to_json();
  ck.config["model"] = "baseline-" + std::string(to_string(model.variant()));
  return ck;
}

BaselineBundle baseline_from_checkpoint(const Checkpoint& checkpoint) {
  const std::string kind = checkpoint_kind(checkpoint);
  if (!kind.starts_with("baseline-")) {
    throw FormatError(Kind::kInconsistent,
                      "checkpoint holds a '" + kind + "' model, not a baseline");
  }
  const BaselineVariant variant =
      parse_baseline_variant(std::string_view(kind).substr(9));
  ModelConfig cfg = ModelConfig::from_json(checkpoint.config);
  BaselineModel model(variant, cfg.input_dim, cfg.classes,
                      params_with_prefix(checkpoint, "baseline."));
  return {std::move(model), std::move(cfg)};
}

std::string checkpoint_kind(const Checkpoint& checkpoint) {
  const auto it = checkpoint.config.find("model");
  if (it == checkpoint.config.end() || !it->is_string()) {
    throw FormatError(Kind::kBadManifest,
                      "checkpoint config lacks a \"model\" kind");
  }
  return it->get<std::string>();
}

}  // namespace sgnl
