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

#include "sgnl/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <thread>

#include "sgnl/errors.hpp"
#include "sgnl/nn.hpp"

namespace sgnl {

namespace {

struct Sample {
  std::vector<double> x;
  std::size_t y = 0;  // internal class id
};

struct Dataset {
  std::vector<Sample> train;
  std::vector<Sample> dev;
};

/// Runs fn(0..n-1); tasks may execute concurrently. Callers keep results in
/// per-task slots so the outcome is independent of scheduling.
void parallel_tasks(std::size_t n, const std::function<void(std::size_t)>& fn) {
  if (n <= 1 || std::thread::hardware_concurrency() <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> workers;
  workers.reserve(n);
  for (std::size_t i = 0; i < n; ++i) workers.emplace_back(fn, i);
}

bool threaded() { return std::thread::hardware_concurrency() > 1; }

Dataset load_dataset(const EmbeddingBundle& bundle,
                     std::span<const std::int32_t> seen) {
  std::vector<std::int64_t> to_internal(bundle.label_names.size(), -1);
  for (std::size_t i = 0; i < seen.size(); ++i) {
    to_internal[static_cast<std::size_t>(seen[i])] =
        static_cast<std::int64_t>(i);
  }
  const auto collect = [&](const char* split) {
    const auto it = bundle.splits.find(split);
    if (it == bundle.splits.end()) {
      throw ValidationError(std::string("bundle has no '") + split +
                            "' split");
    }
    std::vector<Sample> out;
    for (std::uint32_t record : it->second) {
      const std::int32_t label = bundle.label_ids[record];
      if (label == kUnlabeled) continue;
      const std::int64_t internal = to_internal[static_cast<std::size_t>(label)];
      if (internal < 0) continue;
      const auto v = bundle.vector(record);
      out.push_back({std::vector<double>(v.begin(), v.end()),
                     static_cast<std::size_t>(internal)});
    }
    if (out.empty()) {
      throw ValidationError(std::string("split '") + split +
                            "' has no records of the seen classes");
    }
    return out;
  };
  Dataset data{collect("train"), collect("dev")};
  std::vector<std::size_t> per_class(seen.size(), 0);
  for (const auto& s : data.train) ++per_class[s.y];
  for (std::size_t c = 0; c < seen.size(); ++c) {
    if (per_class[c] == 0) {
      throw ValidationError("seen class '" +
                            bundle.label_names[static_cast<std::size_t>(seen[c])] +
                            "' has no train samples");
    }
  }
  return data;
}

void check_config(const TrainConfig& config) {
  if (!(config.lr >= 0.0) || config.batch_size == 0 || config.max_epochs == 0 ||
      config.patience == 0) {
    throw ValidationError(
        "train config needs lr >= 0 and positive batch size, epoch limit and "
        "patience");
  }
}

using LossGradFn = std::function<double(const Sample&, GradBuffer&)>;
using ClassifyFn = std::function<std::size_t(const Sample&)>;

double accuracy(const std::vector<Sample>& samples, const ClassifyFn& classify) {
  std::vector<std::size_t> correct(kGradPartitions, 0);
  parallel_tasks(kGradPartitions, [&](std::size_t part) {
    const std::size_t lo = part * samples.size() / kGradPartitions;
    const std::size_t hi = (part + 1) * samples.size() / kGradPartitions;
    for (std::size_t i = lo; i < hi; ++i) {
      if (classify(samples[i]) == samples[i].y) ++correct[part];
    }
  });
  const std::size_t total = std::accumulate(correct.begin(), correct.end(),
                                            std::size_t{0});
  return static_cast<double>(total) / static_cast<double>(samples.size());
}

/// Shared mini-batch loop with dev-accuracy early stopping. Leaves the best
/// epoch's values in `params`.
TrainReport run_training(ParamSet& params, const Dataset& data,
                         const TrainConfig& config, Rng& rng,
                         const LossGradFn& loss_grad,
                         const ClassifyFn& classify) {
  const AdamConfig adam{config.lr, 0.9, 0.999, 1e-8};
  const bool use_threads = threaded();
  std::vector<GradBuffer> buffers(use_threads ? kGradPartitions : 1);
  for (auto& b : buffers) b = params.make_grad_buffer();

  std::vector<std::size_t> order(data.train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  TrainReport report;
  double best_accuracy = -1.0;
  std::size_t since_best = 0;
  std::vector<Tensor> best_values;

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += config.batch_size) {
      const std::size_t batch = std::min(config.batch_size, order.size() - start);
      std::vector<double> part_loss(kGradPartitions, 0.0);
      const auto run_part = [&](std::size_t part, GradBuffer& grads) {
        for (auto& t : grads) t.fill(0.0);
        const std::size_t lo = start + part * batch / kGradPartitions;
        const std::size_t hi = start + (part + 1) * batch / kGradPartitions;
        for (std::size_t i = lo; i < hi; ++i) {
          part_loss[part] += loss_grad(data.train[order[i]], grads);
        }
      };
      const double scale = 1.0 / static_cast<double>(batch);
      if (use_threads) {
        parallel_tasks(kGradPartitions,
                       [&](std::size_t part) { run_part(part, buffers[part]); });
        for (const auto& grads : buffers) params.accumulate(grads, scale);
      } else {
        for (std::size_t part = 0; part < kGradPartitions; ++part) {
          run_part(part, buffers[0]);
          params.accumulate(buffers[0], scale);
        }
      }
      for (double l : part_loss) epoch_loss += l;
      adam_step(params, adam);
    }

    const double dev_acc = accuracy(data.dev, classify);
    report.epochs.push_back(
        {epoch, epoch_loss / static_cast<double>(order.size()), dev_acc});
    if (dev_acc > best_accuracy) {
      best_accuracy = dev_acc;
      report.best_epoch = epoch;
      best_values = params.snapshot_values();
      since_best = 0;
    } else if (++since_best >= config.patience) {
      report.stopped_early = true;
      break;
    }
  }
  params.restore_values(best_values);
  return report;
}

/// Loss and dlogits for one sample; gradient is zero where the clamp binds.
double ce_with_grad(const std::vector<double>& p, std::size_t y,
                    std::vector<double>& dlogits) {
  const double loss = cross_entropy(p, y);
  dlogits.assign(p.size(), 0.0);
  if (p[y] >= 1e-12) {
    for (std::size_t i = 0; i < p.size(); ++i) dlogits[i] = p[i];
    dlogits[y] -= 1.0;
  }
  return loss;
}

}  // namespace

nlohmann::json TrainReport::to_json() const {
  nlohmann::json j;
  j["epochs"] = nlohmann::json::array();
  for (const auto& e : epochs) {
    j["epochs"].push_back({{"epoch", e.epoch},
                           {"train_loss", e.train_loss},
                           {"dev_accuracy", e.dev_accuracy}});
  }
  j["best_epoch"] = best_epoch;
  j["stopped_early"] = stopped_early;
  return j;
}

double cross_entropy(std::span<const double> p, std::size_t y) {
  if (y >= p.size()) {
    throw ValidationError("class id " + std::to_string(y) + " outside [0, " +
                          std::to_string(p.size()) + ")");
  }
  return -std::log(std::max(p[y], 1e-12));
}

std::vector<std::int32_t> resolve_seen_classes(
    const EmbeddingBundle& bundle, std::span<const std::int32_t> requested) {
  std::vector<std::int32_t> seen(requested.begin(), requested.end());
  if (seen.empty()) {
    for (std::size_t i = 0; i < bundle.label_names.size(); ++i) {
      seen.push_back(static_cast<std::int32_t>(i));
    }
  }
  std::set<std::int32_t> unique;
  for (std::int32_t id : seen) {
    if (id < 0 || static_cast<std::size_t>(id) >= bundle.label_names.size()) {
      throw ValidationError("seen class id " + std::to_string(id) +
                            " is not a label of this bundle (" +
                            std::to_string(bundle.label_names.size()) +
                            " labels)");
    }
    if (!unique.insert(id).second) {
      throw ValidationError("seen class id " + std::to_string(id) +
                            " listed twice");
    }
  }
  if (seen.size() < 2) {
    throw ValidationError("at least two seen classes are required");
  }
  return seen;
}

TrainResult train(const EmbeddingBundle& bundle, const TrainConfig& config) {
  check_config(config);
  const auto seen = resolve_seen_classes(bundle, config.seen_class_ids);
  // Fails early (ShapeError) on embeddings too short for the conv stack.
  ConvShape::for_input(bundle.dim);
  const Dataset data = load_dataset(bundle, seen);

  ModelConfig mc;
  mc.input_dim = bundle.dim;
  mc.classes = seen.size();
  mc.heads = config.heads;
  mc.alpha = config.alpha;
  mc.tau = config.tau;
  mc.k = config.k;
  mc.eps = config.eps;
  mc.seen_class_ids = seen;
  for (std::int32_t id : seen) {
    mc.seen_class_names.push_back(bundle.label_names[static_cast<std::size_t>(id)]);
  }
  if (config.k == 0 || config.k > data.train.size()) {
    throw ValidationError("K=" + std::to_string(config.k) +
                          " must lie in [1, " +
                          std::to_string(data.train.size()) + "]");
  }

  Rng rng(config.seed);
  SignalModel model(mc, rng);
  const Encoder& encoder = model.encoder();
  const GnnHead& gnn = model.gnn();
  ParamSet& params = model.params();

  const LossGradFn loss_grad = [&](const Sample& s, GradBuffer& grads) {
    EncoderCache enc_cache;
    const auto z = encoder.forward(params, s.x, &enc_cache);
    GnnCache gnn_cache;
    const GnnOutput out = gnn.forward(params, z, &gnn_cache);
    std::vector<double> dlogits;
    const double loss = ce_with_grad(out.p, s.y, dlogits);
    std::vector<double> dz(z.size(), 0.0);
    gnn.backward(params, z, gnn_cache, dlogits, grads, dz);
    encoder.backward(params, s.x, enc_cache, dz, grads);
    return loss;
  };
  const ClassifyFn classify = [&](const Sample& s) {
    return argmax(gnn.forward(params, encoder.forward(params, s.x)).p);
  };

  TrainReport report = run_training(params, data, config, rng, loss_grad,
                                    classify);

  Tensor latents({data.train.size(), kLatentDim});
  std::vector<std::size_t> labels(data.train.size());
  parallel_tasks(kGradPartitions, [&](std::size_t part) {
    const std::size_t lo = part * data.train.size() / kGradPartitions;
    const std::size_t hi = (part + 1) * data.train.size() / kGradPartitions;
    for (std::size_t i = lo; i < hi; ++i) {
      const auto z = encoder.forward(params, data.train[i].x);
      std::copy(z.begin(), z.end(), latents.row(i).begin());
      labels[i] = data.train[i].y;
    }
  });
  KnnIndex index = KnnIndex::fit(std::move(latents), std::move(labels),
                                 mc.classes, config.k, config.eps);
  return {std::move(model), std::move(index), std::move(report)};
}

BaselineTrainResult train_baseline(const EmbeddingBundle& bundle,
                                   const TrainConfig& config,
                                   BaselineVariant variant) {
  check_config(config);
  const auto seen = resolve_seen_classes(bundle, config.seen_class_ids);
  if (variant == BaselineVariant::kCnn) ConvShape::for_input(bundle.dim);
  const Dataset data = load_dataset(bundle, seen);

  ModelConfig mc;
  mc.input_dim = bundle.dim;
  mc.classes = seen.size();
  mc.seen_class_ids = seen;
  for (std::int32_t id : seen) {
    mc.seen_class_names.push_back(bundle.label_names[static_cast<std::size_t>(id)]);
  }

  Rng rng(config.seed);
  BaselineModel model(variant, bundle.dim, seen.size(), rng);

  const LossGradFn loss_grad = [&](const Sample& s, GradBuffer& grads) {
    BaselineCache cache;
    const auto p = model.forward(s.x, &cache);
    std::vector<double> dlogits;
    const double loss = ce_with_grad(p, s.y, dlogits);
    model.backward(s.x, cache, dlogits, grads);
    return loss;
  };
  const ClassifyFn classify = [&](const Sample& s) {
    return argmax(model.forward(s.x));
  };
  TrainReport report = run_training(model.params(), data, config, rng,
                                    loss_grad, classify);
  return {std::move(model), std::move(mc), std::move(report)};
}

}  // namespace sgnl
