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

// Acceptance runner: one PASS/FAIL line per criterion, exit 1 on any FAIL.
// An optional argument names a directory that keeps the desk-run outputs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "sgnl/attention.hpp"
#include "sgnl/binary_io.hpp"
#include "sgnl/bundle.hpp"
#include "sgnl/checkpoint.hpp"
#include "sgnl/cli.hpp"
#include "sgnl/errors.hpp"
#include "sgnl/fusion.hpp"
#include "sgnl/gnn.hpp"
#include "sgnl/knn.hpp"
#include "sgnl/metrics.hpp"
#include "sgnl/model.hpp"
#include "sgnl/nn.hpp"
#include "sgnl/pca.hpp"
#include "testkit.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sgnl;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  return json::parse(in);
}

void cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  if (code != kExitOk) {
    throw std::runtime_error("sgnl " + args.front() + " exited " +
                             std::to_string(code) + ": " + err.str());
  }
}

// ---------------------------------------------------------------------------

Outcome gradient_suite() {
  const auto start = Clock::now();
  Rng rng(7);
  testkit::GradReport total;
  std::size_t configs = 0;
  for (const auto& [name, check] : testkit::gradient_suite()) {
    for (int i = 0; i < 20; ++i) {
      total.merge(check(rng));
      ++configs;
    }
  }
  const double secs = seconds_since(start);
  return {total.worst < 1e-4 && secs < 30.0,
          std::to_string(configs) + " configurations, " +
              std::to_string(total.probes) + " probes (" +
              std::to_string(total.skipped) + " skipped at kinks), worst rel " +
              fmt(total.worst) + " at " + total.where + ", " + fmt(secs) +
              " s"};
}

Outcome oracle_equivalence() {
  Rng rng(101);
  double knn_worst = 0.0, eer_worst = 0.0, pca_worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng.below(50);
    const std::size_t d = 1 + rng.below(8);
    const std::size_t classes = 1 + rng.below(5);
    const std::size_t k = 1 + rng.below(m);
    const Tensor latents = testkit::random_tensor({m, d}, rng, 3.0);
    std::vector<std::size_t> labels(m);
    for (auto& l : labels) l = rng.below(classes);
    const auto z = testkit::random_vector(d, rng, 3.0);
    const auto got = KnnIndex::fit(latents, labels, classes, k).predict(z);
    const auto want =
        testkit::brute_knn(latents, labels, classes, k, kDefaultKnnEps, z);
    for (std::size_t c = 0; c < classes; ++c) {
      knn_worst = std::max(knn_worst, std::abs(got[c] - want[c]));
    }
  }
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(99);
    std::vector<double> scores(n);
    std::vector<std::uint8_t> labels(n);
    const double grain = trial % 2 == 0 ? 0.05 : 1e-12;
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = static_cast<std::uint8_t>(i < 2 ? i : rng.below(2));
      scores[i] = std::round((rng.uniform() + 0.4 * labels[i]) / grain) * grain;
    }
    eer_worst = std::max(eer_worst, std::abs(compute_eer(scores, labels) -
                                             testkit::brute_eer(scores, labels)));
  }
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 2 + rng.below(7);
    const std::size_t m = d + 2 + rng.below(80);
    Tensor points({m, d});
    for (std::size_t j = 0; j < d; ++j) {
      const double spread = 0.2 + 3.0 * rng.uniform();
      for (std::size_t i = 0; i < m; ++i) points.at(i, j) = spread * rng.normal();
    }
    const PcaResult r = pca_project(points, trial);
    const auto eig = testkit::eigenvalues_desc(testkit::covariance(points));
    pca_worst = std::max({pca_worst, std::abs(r.variances[0] - eig[0]),
                          std::abs(r.variances[1] - eig[1])});
  }
  return {knn_worst <= 1e-12 && eer_worst <= 1e-9 && pca_worst <= 1e-6,
          "knn 200 cases max |Δ| " + fmt(knn_worst) + "; eer 200 cases " +
              fmt(eer_worst) + "; pca 100 cases " + fmt(pca_worst)};
}

double simplex_error(std::span<const double> p) {
  double err = std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0);
  for (double v : p) {
    if (v < 0.0) err = std::max(err, -v + 1.0);  // any negative fails
  }
  return err;
}

Outcome simplex_entropy() {
  Rng rng(202);
  double worst_simplex = 0.0;
  std::size_t entropy_violations = 0;
  std::size_t cases = 0;
  for (int model_trial = 0; model_trial < 10; ++model_trial) {
    ModelConfig cfg;
    cfg.input_dim = 16;
    cfg.classes = 2 + rng.below(6);
    cfg.k = 3;
    for (std::size_t c = 0; c < cfg.classes; ++c) {
      cfg.seen_class_ids.push_back(static_cast<std::int32_t>(c));
      cfg.seen_class_names.push_back("c" + std::to_string(c));
    }
    const SignalModel model(cfg, rng);
    Tensor latents({30, cfg.latent_dim});
    std::vector<std::size_t> labels;
    for (std::size_t i = 0; i < 30; ++i) {
      const auto z = model.encode(testkit::random_vector(16, rng, 2.0));
      std::copy(z.begin(), z.end(), latents.row(i).begin());
      labels.push_back(i % cfg.classes);
    }
    const KnnIndex index = KnnIndex::fit(latents, labels, cfg.classes, cfg.k);
    for (int i = 0; i < 20; ++i) {
      FusionConfig fusion;
      fusion.alpha = rng.uniform();
      const Prediction p =
          predict(testkit::random_vector(16, rng, 3.0), model, index, fusion);
      worst_simplex = std::max({worst_simplex, simplex_error(p.p_gnn),
                                simplex_error(p.p_knn), simplex_error(p.p_ens)});
      const double cap = std::log(static_cast<double>(cfg.classes));
      if (!(p.entropy >= 0.0 && p.entropy <= cap + 1e-12)) ++entropy_violations;
      ++cases;
    }
  }
  double endpoint_worst = 0.0;
  for (std::size_t n = 1; n <= 64; ++n) {
    std::vector<double> one_hot(n, 0.0);
    one_hot[n / 2] = 1.0;
    endpoint_worst = std::max(endpoint_worst, std::abs(attention_entropy(one_hot)));
    const std::vector<double> uniform(n, 1.0 / static_cast<double>(n));
    endpoint_worst =
        std::max(endpoint_worst, std::abs(attention_entropy(uniform) -
                                          std::log(static_cast<double>(n))));
  }
  return {worst_simplex <= 1e-9 && entropy_violations == 0 &&
              endpoint_worst <= 1e-12,
          std::to_string(cases) + " predictions, worst simplex error " +
              fmt(worst_simplex) + ", " + std::to_string(entropy_violations) +
              " entropy-bound violations; endpoints N=1..64 worst " +
              fmt(endpoint_worst)};
}

Outcome symmetry_suite() {
  Rng rng(303);
  constexpr int kCases = 50;
  double perm_worst = 0.0, shift_worst = 0.0, knn_worst = 0.0;
  std::size_t attention_mismatch = 0;

  for (int trial = 0; trial < kCases; ++trial) {
    const std::size_t classes = 2 + rng.below(6);
    ParamSet params;
    const GnnHead head = GnnHead::create(params, classes, 8, 2, rng);
    const auto z = testkit::random_vector(8, rng);
    const GnnOutput before = head.forward(params, z);
    std::vector<std::size_t> perm(classes);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(perm));
    Tensor& protos = params.value(head.prototypes_id());
    const Tensor original = protos;
    for (std::size_t i = 0; i < classes; ++i) {
      std::copy(original.row(perm[i]).begin(), original.row(perm[i]).end(),
                protos.row(i).begin());
    }
    const GnnOutput after = head.forward(params, z);
    for (std::size_t i = 0; i < classes; ++i) {
      perm_worst = std::max(perm_worst, std::abs(after.p[i] - before.p[perm[i]]));
    }
  }
  for (int trial = 0; trial < kCases; ++trial) {
    auto logits = testkit::random_vector(1 + rng.below(10), rng, 5.0);
    const auto p = nn::softmax(logits);
    const double shift = rng.uniform(-100.0, 100.0);
    for (double& l : logits) l += shift;
    const auto q = nn::softmax(logits);
    for (std::size_t i = 0; i < p.size(); ++i) {
      shift_worst = std::max(shift_worst, std::abs(p[i] - q[i]));
    }
  }
  for (int trial = 0; trial < kCases; ++trial) {
    const std::size_t n = 2 + rng.below(5), heads = 1 + rng.below(3);
    const std::size_t d = heads * (1 + rng.below(3));
    Tensor x = testkit::random_tensor({n, d}, rng);
    const std::size_t a = rng.below(n);
    const std::size_t b = (a + 1 + rng.below(n - 1)) % n;
    std::copy(x.row(a).begin(), x.row(a).end(), x.row(b).begin());
    const Tensor y = nn::mha_forward(
        x,
        {testkit::random_tensor({d, d}, rng), testkit::random_tensor({d, d}, rng),
         testkit::random_tensor({d, d}, rng), testkit::random_tensor({d, d}, rng),
         heads},
        nullptr);
    for (std::size_t j = 0; j < d; ++j) {
      if (y.at(a, j) != y.at(b, j)) ++attention_mismatch;
    }
  }
  for (int trial = 0; trial < kCases; ++trial) {
    const std::size_t m = 1 + rng.below(40), d = 1 + rng.below(8);
    const std::size_t classes = 1 + rng.below(4), k = 1 + rng.below(m);
    Tensor latents = testkit::random_tensor({m, d}, rng, 3.0);
    std::vector<std::size_t> labels(m);
    for (auto& l : labels) l = rng.below(classes);
    auto z = testkit::random_vector(d, rng, 3.0);
    const auto p = KnnIndex::fit(latents, labels, classes, k).predict(z);
    const auto shift = testkit::random_vector(d, rng, 0.5);
    for (std::size_t i = 0; i < m; ++i) axpy(1.0, shift, latents.row(i));
    axpy(1.0, shift, z);
    const auto q = KnnIndex::fit(latents, labels, classes, k).predict(z);
    for (std::size_t c = 0; c < classes; ++c) {
      knn_worst = std::max(knn_worst, std::abs(p[c] - q[c]));
    }
  }
  return {perm_worst <= 1e-12 && shift_worst <= 1e-12 &&
              attention_mismatch == 0 && knn_worst <= 1e-9,
          std::to_string(kCases) + " cases each: prototype permutation " +
              fmt(perm_worst) + ", softmax shift " + fmt(shift_worst) +
              ", identical-node mismatches " +
              std::to_string(attention_mismatch) + ", knn translation " +
              fmt(knn_worst)};
}

// ---------------------------------------------------------------------------

struct DeskRun {
  fs::path dir;
  double seconds = 0.0;
};

/// synth → train → eval (closed, open for each branch) → sweep, all through
/// the command-line entry point.
DeskRun desk_run(const fs::path& dir) {
  fs::create_directories(dir);
  const std::string data = (dir / "data").string();
  const std::string model = (dir / "model").string();
  const auto start = Clock::now();
  cli({"synth", "--classes", "6", "--per-class", "200", "--dim", "512", "--std",
       "0.3", "--radius", "5", "--seed", "42", "--out", data});
  cli({"train", "--bundle", data, "--seen", "0,1,2,3", "--k", "5", "--alpha",
       "0.5", "--tau", "0.5", "--seed", "42", "--out", model});
  const std::vector<std::string> eval{"eval", "--bundle", data, "--model",
                                      model, "--split", "test"};
  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> args = eval;
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
  };
  cli(with({"--protocol", "closed", "--report", (dir / "closed.json").string()}));
  cli(with({"--protocol", "open", "--tau", "0.5", "--alpha", "0.5", "--report",
            (dir / "open.json").string(), "--predictions",
            (dir / "predictions.jsonl").string(), "--confusion",
            (dir / "confusion.csv").string()}));
  cli(with({"--protocol", "open", "--branch", "gnn", "--report",
            (dir / "open_gnn.json").string()}));
  cli(with({"--protocol", "open", "--branch", "knn", "--report",
            (dir / "open_knn.json").string()}));
  const double seconds = seconds_since(start);
  cli({"sweep", "--bundle", data, "--model", model, "--split", "test",
       "--tau-min", "0.1", "--tau-max", "0.9", "--steps", "9", "--alpha", "0.5",
       "--out", (dir / "sweep.csv").string(), "--json",
       (dir / "sweep.json").string()});
  return {dir, seconds};
}

Outcome desk_experiment(const DeskRun& run) {
  const json closed = read_json(run.dir / "closed.json");
  const json open = read_json(run.dir / "open.json");
  const double gnn = read_json(run.dir / "open_gnn.json").at("eer");
  const double knn = read_json(run.dir / "open_knn.json").at("eer");
  const double acc = closed.at("accuracy");
  const double eer = open.at("eer");
  const bool ok = acc >= 0.95 && eer <= 0.10 &&
                  eer <= std::min(gnn, knn) + 0.02 && run.seconds < 120.0;
  return {ok, "closed acc " + fmt(acc) + ", open EER ensemble " + fmt(eer) +
                  " / gnn " + fmt(gnn) + " / knn " + fmt(knn) + ", open acc " +
                  fmt(open.at("accuracy")) + ", " + fmt(run.seconds) + " s"};
}

Outcome threshold_sweep(const DeskRun& run) {
  const json rows = read_json(run.dir / "sweep.json").at("rows");
  std::vector<double> eer;
  std::vector<std::size_t> unseen;
  for (const auto& row : rows) {
    eer.push_back(row.at("eer_open"));
    unseen.push_back(row.at("report").at("unseen_routed"));
  }
  if (eer.size() != 9) return {false, "expected 9 grid points"};
  const double interior_min = *std::min_element(eer.begin() + 1, eer.end() - 1);
  const bool interior = interior_min < eer.front() && interior_min < eer.back();
  const bool monotone = std::is_sorted(unseen.begin(), unseen.end());
  std::string curve, counts;
  for (std::size_t i = 0; i < eer.size(); ++i) {
    curve += (i ? " " : "") + fmt(eer[i]);
    counts += (i ? " " : "") + std::to_string(unseen[i]);
  }
  return {interior && monotone,
          "eer_open [" + curve + "], unseen routed [" + counts + "]"};
}

Outcome determinism(const DeskRun& first, const fs::path& second_dir) {
  const DeskRun second = desk_run(second_dir);
  std::vector<std::string> differing;
  const std::vector<fs::path> files{
      "model/model.sgm", "model/train_report.json", "closed.json",
      "open.json",       "open_gnn.json",           "open_knn.json",
      "predictions.jsonl", "confusion.csv",         "sweep.csv",
      "sweep.json"};
  for (const auto& file : files) {
    if (io::read_file(first.dir / file) != io::read_file(second.dir / file)) {
      differing.push_back(file.string());
    }
  }
  std::string detail = std::to_string(files.size()) + " artifacts compared";
  for (const auto& f : differing) detail += ", differs: " + f;
  return {differing.empty(), detail};
}

Outcome format_conformance() {
  using Kind = FormatError::Kind;
  std::size_t checks = 0;
  std::vector<std::string> failures;
  testkit::TempDir dir;
  for (const char* name : {"bundle_one", "bundle_three", "bundle_empty"}) {
    const fs::path out = dir / name;
    write_bundle(read_bundle(testkit::fixture(name)), out);
    for (const char* file : {"embeddings.bin", "labels.bin", "manifest.json"}) {
      ++checks;
      if (io::read_file(out / file) !=
          io::read_file(testkit::fixture(name) / file)) {
        failures.push_back(std::string(name) + "/" + file);
      }
    }
  }
  for (const char* name : {"ck_small.sgm", "ck_empty.sgm"}) {
    ++checks;
    const auto bytes = io::read_file(testkit::fixture(name));
    if (encode_checkpoint(decode_checkpoint(bytes, name)) != bytes) {
      failures.push_back(name);
    }
  }
  const auto expect_kind = [&](const std::string& name, Kind kind,
                               const std::function<void()>& load) {
    ++checks;
    try {
      load();
      failures.push_back(name + " loaded");
    } catch (const FormatError& e) {
      if (e.kind() != kind) failures.push_back(name + " wrong kind");
    }
  };
  const std::vector<std::pair<std::string, Kind>> bundles{
      {"corrupt_magic", Kind::kBadMagic},
      {"corrupt_truncated", Kind::kTruncated},
      {"corrupt_count", Kind::kInconsistent},
      {"corrupt_dangling", Kind::kDanglingSplit},
      {"corrupt_label", Kind::kLabelOutOfRange},
      {"corrupt_version", Kind::kBadVersion},
      {"corrupt_nonfinite", Kind::kNonFinite}};
  for (const auto& [name, kind] : bundles) {
    expect_kind(name, kind, [&] { read_bundle(testkit::fixture(name)); });
  }
  const std::vector<std::pair<std::string, Kind>> checkpoints{
      {"ck_version2.sgm", Kind::kBadVersion},
      {"ck_duplicate.sgm", Kind::kDuplicateTensor},
      {"ck_truncated.sgm", Kind::kTruncated},
      {"ck_magic.sgm", Kind::kBadMagic}};
  for (const auto& [name, kind] : checkpoints) {
    expect_kind(name, kind, [&] { load_checkpoint(testkit::fixture(name)); });
  }
  std::string detail = std::to_string(checks) + " fixture checks";
  for (const auto& f : failures) detail += ", failed: " + f;
  return {failures.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  std::optional<testkit::TempDir> scratch;
  fs::path work;
  if (argc > 1) {
    work = argv[1];
  } else {
    scratch.emplace();
    work = scratch->path();
  }

  bool all = true;
  const auto report = [&](const std::string& name,
                          const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail
              << std::endl;
  };

  report("gradient suite", gradient_suite);
  report("oracle equivalence", oracle_equivalence);
  report("simplex and entropy invariants", simplex_entropy);
  report("symmetry suite", symmetry_suite);

  std::optional<DeskRun> desk;
  std::string desk_error;
  try {
    desk = desk_run(work / "run1");
  } catch (const std::exception& e) {
    desk_error = e.what();
  }
  const auto needs_desk = [&](const std::function<Outcome(const DeskRun&)>& fn) {
    return [&, fn]() -> Outcome {
      if (!desk) return {false, "desk run failed: " + desk_error};
      return fn(*desk);
    };
  };
  report("desk-scale open-set experiment", needs_desk(desk_experiment));
  report("threshold sweep", needs_desk(threshold_sweep));
  report("determinism", needs_desk([&](const DeskRun& d) {
           return determinism(d, work / "run2");
         }));
  report("format conformance", format_conformance);
  return all ? 0 : 1;
}
