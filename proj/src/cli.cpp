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

#include "sgnl/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string_view>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "sgnl/baseline.hpp"
#include "sgnl/binary_io.hpp"
#include "sgnl/bundle.hpp"
#include "sgnl/checkpoint.hpp"
#include "sgnl/errors.hpp"
#include "sgnl/gnn.hpp"
#include "sgnl/metrics.hpp"
#include "sgnl/model.hpp"
#include "sgnl/pca.hpp"
#include "sgnl/report_io.hpp"
#include "sgnl/trainer.hpp"

namespace sgnl {

namespace {

namespace fs = std::filesystem;

constexpr const char* kModelFile = "model.sgm";
constexpr const char* kTrainReportFile = "train_report.json";

void configure_logging() {
  static const bool once = [] {
    auto logger = spdlog::stderr_color_mt("sgnl");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char* level = std::getenv("SIGNAL_LOG")) {
      const std::string_view v(level);
      if (v == "error") spdlog::set_level(spdlog::level::err);
      if (v == "info") spdlog::set_level(spdlog::level::info);
      if (v == "debug") spdlog::set_level(spdlog::level::debug);
    }
    return true;
  }();
  (void)once;
}

fs::path model_path(const fs::path& model) {
  return fs::is_directory(model) ? model / kModelFile : model;
}

std::vector<double> to_double(std::span<const float> v) {
  return {v.begin(), v.end()};
}

const std::vector<std::uint32_t>& require_split(const EmbeddingBundle& bundle,
                                                const std::string& split) {
  const auto it = bundle.splits.find(split);
  if (it == bundle.splits.end()) {
    std::string known;
    for (const auto& [name, _] : bundle.splits) {
      known += (known.empty() ? "" : ", ") + name;
    }
    throw ValidationError("split '" + split + "' is absent from the bundle" +
                          (known.empty() ? "" : " (has: " + known + ")"));
  }
  return it->second;
}

/// A loaded checkpoint of either kind, behind one prediction call.
class LoadedModel {
 public:
  explicit LoadedModel(const fs::path& path) {
    const Checkpoint ck = load_checkpoint(model_path(path));
    if (checkpoint_kind(ck) == "signal") {
      signal_.emplace(signal_from_checkpoint(ck));
    } else {
      baseline_.emplace(baseline_from_checkpoint(ck));
    }
  }

  const ModelConfig& config() const {
    return signal_ ? signal_->model.config() : baseline_->config;
  }
  bool is_signal() const { return signal_.has_value(); }
  const SignalBundle& signal() const { return *signal_; }

  void check_dim(std::size_t dim) const {
    if (dim != config().input_dim) {
      throw ValidationError("embedding dim " + std::to_string(dim) +
                            " does not match the model input dim " +
                            std::to_string(config().input_dim));
    }
  }

  /// Baselines have a single posterior; it fills every branch slot.
  Prediction predict(std::span<const double> z0,
                     const FusionConfig& fusion) const {
    if (signal_) return sgnl::predict(z0, signal_->model, signal_->index, fusion);
    fusion.validate();
    Prediction p;
    p.p_gnn = baseline_->model.forward(z0);
    p.p_knn = p.p_gnn;
    p.p_ens = p.p_gnn;
    p.entropy = attention_entropy(p.p_ens);
    p.max_conf = p.p_ens[argmax(p.p_ens)];
    p.decision = route(p.p_ens, p.entropy, fusion);
    return p;
  }

 private:
  std::optional<SignalBundle> signal_;
  std::optional<BaselineBundle> baseline_;
};

struct FusionFlags {
  std::optional<double> tau;
  std::optional<double> alpha;
  std::string branch = "ensemble";

  void add_to(CLI::App* cmd, bool with_branch) {
    cmd->add_option("--tau", tau, "Confidence threshold (default: checkpoint)");
    cmd->add_option("--alpha", alpha, "GNN weight in the fusion (default: checkpoint)");
    if (with_branch) {
      cmd->add_option("--branch", branch, "Branch to score")
          ->check(CLI::IsMember({"gnn", "knn", "ensemble"}));
    }
  }

  FusionConfig resolve(const ModelConfig& config) const {
    FusionConfig f = config.fusion();
    if (tau) f.tau = *tau;
    if (alpha) f.alpha = *alpha;
    if (branch != "ensemble" && alpha) {
      throw CLI::ValidationError("--alpha cannot be combined with --branch " +
                                 branch);
    }
    if (branch == "gnn") f.alpha = 1.0;
    if (branch == "knn") f.alpha = 0.0;
    f.validate();
    return f;
  }
};

/// Records of a split with their truths relative to the model's seen set.
struct SplitData {
  std::vector<Prediction> predictions;
  std::vector<Truth> truths;
  std::size_t seen = 0;
};

SplitData predict_split(const EmbeddingBundle& bundle, const std::string& split,
                        const LoadedModel& model, const FusionConfig& fusion,
                        bool seen_only) {
  const auto& records = require_split(bundle, split);
  model.check_dim(bundle.dim);
  const auto& seen_ids = model.config().seen_class_ids;
  SplitData data;
  for (std::uint32_t r : records) {
    const std::int32_t label = bundle.label_ids[r];
    if (label == kUnlabeled) continue;
    const auto it = std::find(seen_ids.begin(), seen_ids.end(), label);
    const bool is_seen = it != seen_ids.end();
    if (seen_only && !is_seen) continue;
    data.truths.push_back(
        is_seen ? Truth::seen(static_cast<std::size_t>(it - seen_ids.begin()))
                : Truth::unseen());
    data.seen += is_seen ? 1 : 0;
    data.predictions.push_back(
        model.predict(to_double(bundle.vector(r)), fusion));
  }
  if (data.predictions.empty()) {
    throw ValidationError("split '" + split + "' has no labelled records" +
                          (seen_only ? " of the seen classes" : ""));
  }
  return data;
}

int cmd_synth(const SynthConfig& config, const fs::path& out_dir,
              std::ostream& out) {
  const EmbeddingBundle bundle = generate_synthetic(config);
  write_bundle(bundle, out_dir);
  out << "wrote " << bundle.count() << " records (dim " << bundle.dim
      << ") to " << out_dir.string() << "\n";
  return kExitOk;
}

int cmd_validate(const fs::path& dir, std::ostream& out) {
  const EmbeddingBundle bundle = read_bundle(dir);
  out << "ok: " << bundle.count() << " records, dim " << bundle.dim << ", "
      << bundle.label_names.size() << " labels, " << bundle.splits.size()
      << " splits\n";
  return kExitOk;
}

struct TrainFlags {
  fs::path bundle;
  fs::path out;
  std::vector<std::int32_t> seen;
  std::string arch = "signal";
  TrainConfig config;
};

int cmd_train(const TrainFlags& flags, std::ostream& out) {
  const EmbeddingBundle bundle = read_bundle(flags.bundle);
  TrainConfig config = flags.config;
  config.seen_class_ids = flags.seen;
  Checkpoint ck;
  TrainReport report;
  if (flags.arch == "signal") {
    TrainResult result = train(bundle, config);
    ck = to_checkpoint(result.model, result.index);
    report = std::move(result.report);
  } else {
    BaselineTrainResult result =
        train_baseline(bundle, config, parse_baseline_variant(flags.arch));
    ck = to_checkpoint(result.model, result.config);
    report = std::move(result.report);
  }
  for (const auto& e : report.epochs) {
    spdlog::info("epoch {} loss {:.6f} dev acc {:.4f}", e.epoch, e.train_loss,
                 e.dev_accuracy);
  }
  save_checkpoint(ck, flags.out / kModelFile);
  io::write_text(flags.out / kTrainReportFile, pretty_json(report.to_json()));
  out << "best epoch " << report.best_epoch << " of " << report.epochs.size()
      << ", dev accuracy "
      << report.epochs[report.best_epoch - 1].dev_accuracy << "\n";
  return kExitOk;
}

struct EvalFlags {
  fs::path bundle;
  fs::path model;
  std::string split = "test";
  std::string protocol = "closed";
  FusionFlags fusion;
  std::optional<fs::path> report;
  std::optional<fs::path> confusion;
  std::optional<fs::path> predictions;
};

int cmd_eval(const EvalFlags& flags, std::ostream& out) {
  const EmbeddingBundle bundle = read_bundle(flags.bundle);
  const LoadedModel model(flags.model);
  const FusionConfig fusion = flags.fusion.resolve(model.config());
  const bool closed = flags.protocol == "closed";
  const SplitData data =
      predict_split(bundle, flags.split, model, fusion, closed);
  const auto& names = model.config().seen_class_names;

  MetricsReport report;
  if (closed) {
    std::vector<std::size_t> truths;
    for (const auto& t : data.truths) truths.push_back(t.seen_class());
    report = evaluate_closed(data.predictions, truths);
  } else {
    report = evaluate_open(data.predictions, data.truths,
                           model.config().classes);
  }
  nlohmann::json j = report.to_json();
  j["split"] = flags.split;
  j["branch"] = flags.fusion.branch;
  j["alpha"] = fusion.alpha;
  j["tau"] = fusion.tau;
  const std::string text = pretty_json(j);
  if (flags.report) {
    io::write_text(*flags.report, text);
  } else {
    out << text;
  }
  if (flags.confusion) {
    io::write_text(*flags.confusion, report.confusion_csv(names));
  }
  if (flags.predictions) {
    io::write_text(*flags.predictions,
                   predictions_to_jsonl(data.predictions, names));
  }
  return kExitOk;
}

struct PredictFlags {
  fs::path model;
  fs::path embeddings;
  fs::path out;
  FusionFlags fusion;
};

int cmd_predict(const PredictFlags& flags, std::ostream& out) {
  const LoadedModel model(flags.model);
  const EmbeddingBundle bundle = read_bundle(flags.embeddings);
  model.check_dim(bundle.dim);
  const FusionConfig fusion = flags.fusion.resolve(model.config());
  std::vector<Prediction> predictions;
  predictions.reserve(bundle.count());
  for (std::size_t r = 0; r < bundle.count(); ++r) {
    predictions.push_back(model.predict(to_double(bundle.vector(r)), fusion));
  }
  io::write_text(flags.out, predictions_to_jsonl(
                                predictions, model.config().seen_class_names));
  out << "wrote " << predictions.size() << " predictions to "
      << flags.out.string() << "\n";
  return kExitOk;
}

struct SweepFlags {
  fs::path bundle;
  fs::path model;
  std::string split = "test";
  double tau_min = 0.1;
  double tau_max = 0.9;
  std::size_t steps = 9;
  FusionFlags fusion;
  fs::path out;
  std::optional<fs::path> json;
};

int cmd_sweep(const SweepFlags& flags, std::ostream& out) {
  if (!(flags.tau_min < flags.tau_max) || flags.steps == 0) {
    throw CLI::ValidationError("--tau-min must be below --tau-max and --steps positive");
  }
  const EmbeddingBundle bundle = read_bundle(flags.bundle);
  const LoadedModel model(flags.model);
  const FusionConfig fusion = flags.fusion.resolve(model.config());
  const SplitData data =
      predict_split(bundle, flags.split, model, fusion, false);
  const auto grid = tau_grid(flags.tau_min, flags.tau_max, flags.steps);
  const SweepResult sweep = sweep_tau(data.predictions, data.truths,
                                      model.config().classes, grid, fusion);
  io::write_text(flags.out, sweep.to_csv());
  if (flags.json) io::write_text(*flags.json, pretty_json(sweep.to_json()));
  out << "wrote " << sweep.rows.size() << " sweep rows to "
      << flags.out.string() << "\n";
  return kExitOk;
}

struct ProjectFlags {
  fs::path bundle;
  fs::path model;
  std::string split = "test";
  fs::path out;
  std::uint64_t seed = 0;
};

int cmd_project(const ProjectFlags& flags, std::ostream& out) {
  const EmbeddingBundle bundle = read_bundle(flags.bundle);
  const LoadedModel model(flags.model);
  if (!model.is_signal()) {
    throw ValidationError("project needs a signal checkpoint (no encoder in " +
                          std::string("baseline models)"));
  }
  model.check_dim(bundle.dim);
  const auto& records = require_split(bundle, flags.split);
  if (records.empty()) {
    throw ValidationError("split '" + flags.split + "' is empty");
  }
  const SignalModel& signal = model.signal().model;
  Tensor latents({records.size(), signal.config().latent_dim});
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto z = signal.encode(to_double(bundle.vector(records[i])));
    std::copy(z.begin(), z.end(), latents.row(i).begin());
    const std::int32_t id = bundle.label_ids[records[i]];
    labels.push_back(id == kUnlabeled
                         ? "unlabeled"
                         : bundle.label_names[static_cast<std::size_t>(id)]);
  }
  const PcaResult pca = pca_project(latents, flags.seed);
  io::write_text(flags.out, projection_to_csv(pca.projection, labels));
  out << "wrote " << records.size() << " projected points to "
      << flags.out.string() << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  configure_logging();
  CLI::App app{"Seen/unseen source attribution over utterance embeddings", "sgnl"};
  app.require_subcommand(1);

  SynthConfig synth;
  fs::path synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a Gaussian-cluster bundle");
  synth_cmd->add_option("--classes", synth.classes)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--per-class", synth.per_class)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--dim", synth.dim)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--std", synth.cluster_std)->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--radius", synth.mean_radius)->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--seed", synth.seed);
  synth_cmd->add_option("--out", synth_out, "Bundle directory")->required();

  fs::path validate_dir;
  auto* validate_cmd = app.add_subcommand("validate", "Check a bundle directory");
  validate_cmd->add_option("bundle", validate_dir)->required();

  TrainFlags train_flags;
  auto* train_cmd = app.add_subcommand("train", "Train a model on a bundle");
  train_cmd->add_option("--bundle", train_flags.bundle)->required();
  train_cmd->add_option("--seen", train_flags.seen, "Comma-separated seen label ids")
      ->delimiter(',');
  train_cmd->add_option("--epochs", train_flags.config.max_epochs)->check(CLI::PositiveNumber);
  train_cmd->add_option("--lr", train_flags.config.lr)->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--batch", train_flags.config.batch_size)->check(CLI::PositiveNumber);
  train_cmd->add_option("--heads", train_flags.config.heads)->check(CLI::PositiveNumber);
  train_cmd->add_option("--patience", train_flags.config.patience)->check(CLI::PositiveNumber);
  train_cmd->add_option("--seed", train_flags.config.seed);
  train_cmd->add_option("--k", train_flags.config.k)->check(CLI::PositiveNumber);
  train_cmd->add_option("--eps", train_flags.config.eps)->check(CLI::PositiveNumber);
  train_cmd->add_option("--alpha", train_flags.config.alpha)->check(CLI::Range(0.0, 1.0));
  train_cmd->add_option("--tau", train_flags.config.tau)->check(CLI::Range(0.0, 1.0));
  train_cmd->add_option("--arch", train_flags.arch, "Model family")
      ->check(CLI::IsMember({"signal", "fcn", "cnn"}));
  train_cmd->add_option("--out", train_flags.out, "Output directory")->required();

  EvalFlags eval_flags;
  auto* eval_cmd = app.add_subcommand("eval", "Score a split");
  eval_cmd->add_option("--bundle", eval_flags.bundle)->required();
  eval_cmd->add_option("--model", eval_flags.model)->required();
  eval_cmd->add_option("--split", eval_flags.split);
  eval_cmd->add_option("--protocol", eval_flags.protocol)
      ->check(CLI::IsMember({"closed", "open"}));
  eval_flags.fusion.add_to(eval_cmd, true);
  eval_cmd->add_option("--report", eval_flags.report, "Metrics JSON (default: stdout)");
  eval_cmd->add_option("--confusion", eval_flags.confusion, "Confusion matrix CSV");
  eval_cmd->add_option("--predictions", eval_flags.predictions, "Prediction JSON-lines");

  PredictFlags predict_flags;
  auto* predict_cmd = app.add_subcommand("predict", "Predict every record of a bundle");
  predict_cmd->add_option("--model", predict_flags.model)->required();
  predict_cmd->add_option("--embeddings", predict_flags.embeddings)->required();
  predict_flags.fusion.add_to(predict_cmd, false);
  predict_cmd->add_option("--out", predict_flags.out)->required();

  SweepFlags sweep_flags;
  auto* sweep_cmd = app.add_subcommand("sweep", "Threshold sensitivity sweep");
  sweep_cmd->add_option("--bundle", sweep_flags.bundle)->required();
  sweep_cmd->add_option("--model", sweep_flags.model)->required();
  sweep_cmd->add_option("--split", sweep_flags.split);
  sweep_cmd->add_option("--tau-min", sweep_flags.tau_min);
  sweep_cmd->add_option("--tau-max", sweep_flags.tau_max);
  sweep_cmd->add_option("--steps", sweep_flags.steps)->check(CLI::PositiveNumber);
  sweep_flags.fusion.add_to(sweep_cmd, true);
  sweep_cmd->add_option("--out", sweep_flags.out, "Sweep CSV")->required();
  sweep_cmd->add_option("--json", sweep_flags.json, "Full sweep JSON");

  ProjectFlags project_flags;
  auto* project_cmd = app.add_subcommand("project", "2-D PCA of encoded latents");
  project_cmd->add_option("--bundle", project_flags.bundle)->required();
  project_cmd->add_option("--model", project_flags.model)->required();
  project_cmd->add_option("--split", project_flags.split);
  project_cmd->add_option("--seed", project_flags.seed);
  project_cmd->add_option("--out", project_flags.out)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const auto chosen = app.get_subcommands();
    err << (chosen.empty() ? app.help() : chosen.front()->help());
    return kExitUsage;
  }

  try {
    if (synth_cmd->parsed()) return cmd_synth(synth, synth_out, out);
    if (validate_cmd->parsed()) return cmd_validate(validate_dir, out);
    if (train_cmd->parsed()) return cmd_train(train_flags, out);
    if (eval_cmd->parsed()) return cmd_eval(eval_flags, out);
    if (predict_cmd->parsed()) return cmd_predict(predict_flags, out);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_flags, out);
    if (project_cmd->parsed()) return cmd_project(project_flags, out);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const ShapeError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace sgnl
