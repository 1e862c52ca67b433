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

#include "sgnl/report_io.hpp"

#include <sstream>

#include "sgnl/errors.hpp"

namespace sgnl {

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string decision_label(const Decision& decision,
                           std::span<const std::string> class_names) {
  if (decision.is_unseen()) return "unseen";
  const std::size_t c = decision.seen_class();
  if (c >= class_names.size()) {
    throw ValidationError("decision names class " + std::to_string(c) +
                          " but only " + std::to_string(class_names.size()) +
                          " class names are known");
  }
  return "seen:" + class_names[c];
}

nlohmann::json prediction_to_json(const Prediction& prediction,
                                  std::span<const std::string> class_names) {
  return {{"p_gnn", prediction.p_gnn},
          {"p_knn", prediction.p_knn},
          {"p_ens", prediction.p_ens},
          {"entropy", prediction.entropy},
          {"max_conf", prediction.max_conf},
          {"decision", decision_label(prediction.decision, class_names)}};
}

std::string predictions_to_jsonl(std::span<const Prediction> predictions,
                                 std::span<const std::string> class_names) {
  std::string out;
  for (const auto& p : predictions) {
    out += prediction_to_json(p, class_names).dump();
    out += '\n';
  }
  return out;
}

std::string projection_to_csv(const Tensor& projection,
                              std::span<const std::string> labels) {
  if (projection.rank() != 2 || projection.cols() != 2 ||
      projection.rows() != labels.size()) {
    throw ValidationError("projection " + shape_string(projection.dims()) +
                          " does not pair with " +
                          std::to_string(labels.size()) + " labels");
  }
  std::string out = "x,y,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out += format_double(projection.at(i, 0)) + "," +
           format_double(projection.at(i, 1)) + "," + csv_field(labels[i]) +
           "\n";
  }
  return out;
}

std::string pretty_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace sgnl
