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

#include <span>
#include <string>

#include "json.hpp"
#include "sgnl/fusion.hpp"
#include "sgnl/tensor.hpp"

namespace sgnl {

/// "seen:<class-name>" or "unseen".
std::string decision_label(const Decision& decision,
                           std::span<const std::string> class_names);

/// {"p_gnn", "p_knn", "p_ens", "entropy", "max_conf", "decision"}.
nlohmann::json prediction_to_json(const Prediction& prediction,
                                  std::span<const std::string> class_names);

/// One compact JSON object per line, in input order.
std::string predictions_to_jsonl(std::span<const Prediction> predictions,
                                 std::span<const std::string> class_names);

/// Header `x,y,label`; labels[i] names row i of the [M × 2] projection.
std::string projection_to_csv(const Tensor& projection,
                              std::span<const std::string> labels);

/// Two-space indented JSON with a trailing newline.
std::string pretty_json(const nlohmann::json& j);

}  // namespace sgnl
