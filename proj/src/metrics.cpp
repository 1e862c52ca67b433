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

#include "sgnl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "sgnl/errors.hpp"

namespace sgnl {

namespace {

using json = nlohmann::json;

void check_lengths(std::size_t predictions, std::size_t truths) {
  if (predictions == 0) throw ValidationError("no predictions to evaluate");
  if (predictions != truths) {
    throw ValidationError(std::to_string(predictions) + " predictions but " +
                          std::to_string(truths) + " truths");
  }
}

/// Accuracy and macro F1 from a square confusion matrix. Classes with
/// 2TP + FP + FN = 0 (absent from truths and predictions) are skipped.
void fill_from_confusion(MetricsReport& r) {
  const std::size_t n = r.confusion.size();
  std::size_t total = 0;
  std::size_t trace = 0;
  std::vector<std::size_t> row(n, 0);
  std::vector<std::size_t> col(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      total += r.confusion[i][j];
      row[i] += r.confusion[i][j];
      col[j] += r.confusion[i][j];
    }
    trace += r.confusion[i][i];
  }
  r.samples = total;
  r.accuracy = static_cast<double>(trace) / static_cast<double>(total);
  double f1_sum = 0.0;
  std::size_t counted = 0;
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t tp = r.confusion[c][c];
    const std::size_t denom = row[c] + col[c];  // 2TP + FP + FN
    if (denom == 0) continue;
    f1_sum += 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
    ++counted;
  }
  r.f1_macro = f1_sum / static_cast<double>(counted);
}

/// Macro one-vs-rest EER over the classes that have both positives and
/// negatives; `score(i, c)` is sample i's score for class c.
template <typename ScoreFn>
double macro_ovr_eer(std::span<const std::size_t> truths, std::size_t classes,
                     ScoreFn score) {
  std::vector<double> scores(truths.size());
  std::vector<std::uint8_t> labels(truths.size());
  double total = 0.0;
  std::size_t counted = 0;
  for (std::size_t c = 0; c < classes; ++c) {
    std::size_t positives = 0;
    for (std::size_t i = 0; i < truths.size(); ++i) {
      scores[i] = score(i, c);
      labels[i] = truths[i] == c ? 1 : 0;
      positives += labels[i];
    }
    if (positives == 0 || positives == truths.size()) continue;
    total += compute_eer(scores, labels);
    ++counted;
  }
  if (counted == 0) {
    throw ValidationError(
        "EER undefined: fewer than two classes present among the truths");
  }
  return total / static_cast<double>(counted);
}

std::size_t decision_index(const Decision& d, std::size_t classes) {
  return d.is_seen() ? d.seen_class() : classes;
}

double routed_seen_vs_unseen_eer(std::span<const Prediction> predictions,
                                 std::span<const Truth> truths) {
  std::vector<double> scores(predictions.size());
  std::vector<std::uint8_t> labels(predictions.size());
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    scores[i] = predictions[i].decision.is_seen() ? 1.0 : 0.0;
    labels[i] = truths[i].is_seen() ? 1 : 0;
  }
  return compute_eer(scores, labels);
}

void require_both_groups(std::span<const Truth> truths) {
  const auto seen = static_cast<std::size_t>(std::count_if(
      truths.begin(), truths.end(), [](const Truth& t) { return t.is_seen(); }));
  if (seen == truths.size()) {
    throw ValidationError(
        "open-set EER undefined: the split has no unseen-class samples");
  }
  if (seen == 0) {
    throw ValidationError(
        "open-set EER undefined: the split has no seen-class samples");
  }
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string_view to_string(Protocol protocol) {
  return protocol == Protocol::kClosedSet ? "closed" : "open";
}

json MetricsReport::to_json() const {
  return json{{"protocol", std::string(to_string(protocol))},
              {"classes", classes},
              {"samples", samples},
              {"accuracy", accuracy},
              {"f1_macro", f1_macro},
              {"eer", eer},
              {"decision_eer", decision_eer},
              {"unseen_routed", unseen_routed},
              {"confusion", confusion}};
}

std::string MetricsReport::confusion_csv(
    std::span<const std::string> class_names) const {
  std::vector<std::string> names(class_names.begin(), class_names.end());
  while (names.size() < confusion.size()) {
    names.push_back(names.size() == classes ? "unseen"
                                            : std::to_string(names.size()));
  }
  std::string out = "truth";
  for (std::size_t j = 0; j < confusion.size(); ++j) out += "," + names[j];
  out += "\n";
  for (std::size_t i = 0; i < confusion.size(); ++i) {
    out += names[i];
    for (std::size_t v : confusion[i]) out += "," + std::to_string(v);
    out += "\n";
  }
  return out;
}

json SweepResult::to_json() const {
  json rows_json = json::array();
  for (const auto& row : rows) {
    rows_json.push_back({{"tau", row.tau},
                         {"eer_closed", row.eer_closed},
                         {"eer_open", row.eer_open},
                         {"report", row.report.to_json()}});
  }
  return json{{"rows", rows_json}};
}

std::string SweepResult::to_csv() const {
  std::string out = "tau,eer_closed,eer_open\n";
  for (const auto& row : rows) {
    out += format_double(row.tau) + "," + format_double(row.eer_closed) + "," +
           format_double(row.eer_open) + "\n";
  }
  return out;
}

double compute_eer(std::span<const double> scores,
                   std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) {
    throw ValidationError("compute_eer: " + std::to_string(scores.size()) +
                          " scores but " + std::to_string(labels.size()) +
                          " labels");
  }
  if (scores.empty()) throw ValidationError("compute_eer: empty input");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  std::size_t positives = 0;
  for (std::uint8_t l : labels) positives += l != 0 ? 1 : 0;
  const std::size_t negatives = scores.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw ValidationError("compute_eer needs both positive and negative labels");
  }
  const double np = static_cast<double>(positives);
  const double nn = static_cast<double>(negatives);

  // Walk thresholds upward; everything below the current threshold is
  // rejected.
  std::size_t rejected_pos = 0;
  std::size_t rejected_neg = 0;
  double prev_far = 1.0;
  double prev_frr = 0.0;
  std::size_t i = 0;
  while (true) {
    const double far = 1.0 - static_cast<double>(rejected_neg) / nn;
    const double frr = static_cast<double>(rejected_pos) / np;
    if (frr >= far) {
      if (frr == far) return far;
      const double d0 = prev_frr - prev_far;
      const double d1 = frr - far;
      const double lambda = -d0 / (d1 - d0);
      return prev_far + lambda * (far - prev_far);
    }
    prev_far = far;
    prev_frr = frr;
    // Advance past every sample tied at the current lowest score.
    const double t = scores[order[i]];
    while (i < order.size() && scores[order[i]] == t) {
      if (labels[order[i]] != 0) {
        ++rejected_pos;
      } else {
        ++rejected_neg;
      }
      ++i;
    }
  }
}

MetricsReport evaluate_closed(std::span<const Prediction> predictions,
                              std::span<const std::size_t> truths) {
  check_lengths(predictions.size(), truths.size());
  const std::size_t n = predictions.front().p_ens.size();
  MetricsReport r;
  r.protocol = Protocol::kClosedSet;
  r.classes = n;
  r.confusion.assign(n, std::vector<std::size_t>(n, 0));
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i].p_ens.size() != n) {
      throw ValidationError("predictions disagree on the class count");
    }
    if (truths[i] >= n) {
      throw ValidationError("truth class " + std::to_string(truths[i]) +
                            " outside [0, " + std::to_string(n) + ")");
    }
    ++r.confusion[truths[i]][argmax(predictions[i].p_ens)];
  }
  fill_from_confusion(r);
  r.eer = macro_ovr_eer(truths, n, [&](std::size_t i, std::size_t c) {
    return predictions[i].p_ens[c];
  });
  r.decision_eer = macro_ovr_eer(truths, n, [&](std::size_t i, std::size_t c) {
    return argmax(predictions[i].p_ens) == c ? 1.0 : 0.0;
  });
  return r;
}

MetricsReport score_decisions(std::span<const Prediction> predictions,
                              std::span<const Truth> truths,
                              std::size_t classes) {
  check_lengths(predictions.size(), truths.size());
  MetricsReport r;
  r.protocol = Protocol::kOpenSet;
  r.classes = classes;
  r.confusion.assign(classes + 1, std::vector<std::size_t>(classes + 1, 0));
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const std::size_t t = decision_index(truths[i], classes);
    const std::size_t p = decision_index(predictions[i].decision, classes);
    if (t > classes || p > classes) {
      throw ValidationError("seen class id outside [0, " +
                            std::to_string(classes) + ")");
    }
    ++r.confusion[t][p];
    if (predictions[i].decision.is_unseen()) ++r.unseen_routed;
  }
  fill_from_confusion(r);
  return r;
}

MetricsReport evaluate_open(std::span<const Prediction> predictions,
                            std::span<const Truth> truths,
                            std::size_t classes) {
  check_lengths(predictions.size(), truths.size());
  require_both_groups(truths);
  MetricsReport r = score_decisions(predictions, truths, classes);
  std::vector<double> scores(predictions.size());
  std::vector<std::uint8_t> labels(predictions.size());
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    scores[i] = predictions[i].max_conf;
    labels[i] = truths[i].is_seen() ? 1 : 0;
  }
  r.eer = compute_eer(scores, labels);
  r.decision_eer = routed_seen_vs_unseen_eer(predictions, truths);
  return r;
}

SweepResult sweep_tau(std::span<const Prediction> predictions,
                      std::span<const Truth> truths, std::size_t classes,
                      std::span<const double> grid, const FusionConfig& base) {
  if (grid.empty()) throw ValidationError("tau grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw ValidationError("tau grid must be strictly increasing");
    }
  }
  check_lengths(predictions.size(), truths.size());
  require_both_groups(truths);

  std::vector<std::size_t> seen_rows;
  std::vector<std::size_t> seen_truths;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    if (truths[i].is_seen()) {
      seen_rows.push_back(i);
      seen_truths.push_back(truths[i].seen_class());
    }
  }

  SweepResult result;
  std::vector<Prediction> routed(predictions.begin(), predictions.end());
  for (double tau : grid) {
    FusionConfig cfg = base;
    cfg.tau = tau;
    for (auto& p : routed) p.decision = route(p.p_ens, p.entropy, cfg);
    SweepRow row;
    row.tau = tau;
    row.report = evaluate_open(routed, truths, classes);
    row.eer_open = row.report.decision_eer;
    row.eer_closed = macro_ovr_eer(
        seen_truths, classes, [&](std::size_t i, std::size_t c) {
          const Decision& d = routed[seen_rows[i]].decision;
          return d.is_seen() && d.seen_class() == c ? 1.0 : 0.0;
        });
    result.rows.push_back(std::move(row));
  }
  return result;
}

std::vector<double> tau_grid(double lo, double hi, std::size_t steps) {
  if (steps == 0) throw ValidationError("tau grid needs at least one step");
  if (steps == 1) return {lo};
  if (!(lo < hi)) {
    throw ValidationError("tau-min must be below tau-max");
  }
  std::vector<double> grid(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) /
                       static_cast<double>(steps - 1);
  }
  return grid;
}

}  // namespace sgnl
