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

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <chrono>
#include <limits>
#include <numeric>
#include <set>

#include "testkit.hpp"

namespace sgnl::testkit {

Tensor random_tensor(std::vector<std::size_t> dims, Rng& rng, double scale) {
  Tensor t(std::move(dims));
  for (double& v : t.data()) v = scale * rng.uniform(-1.0, 1.0);
  return t;
}

std::vector<double> random_vector(std::size_t n, Rng& rng, double scale) {
  std::vector<double> v(n);
  for (double& x : v) x = scale * rng.uniform(-1.0, 1.0);
  return v;
}

std::vector<double> random_simplex(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  double total = 0.0;
  for (double& x : v) {
    x = rng.uniform() + 1e-3;
    total += x;
  }
  for (double& x : v) x /= total;
  return v;
}

std::vector<double> brute_knn(const Tensor& latents,
                              std::span<const std::size_t> labels,
                              std::size_t classes, std::size_t k, double eps,
                              std::span<const double> z) {
  struct Entry {
    double d2;
    std::size_t index;
  };
  std::vector<Entry> all;
  for (std::size_t i = 0; i < latents.rows(); ++i) {
    double d2 = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) {
      const double diff = z[j] - latents.at(i, j);
      d2 += diff * diff;
    }
    all.push_back({d2, i});
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const Entry& a, const Entry& b) { return a.d2 < b.d2; });
  std::vector<double> p(classes, 0.0);
  double total = 0.0;
  for (std::size_t n = 0; n < k; ++n) {
    const double w = 1.0 / (all[n].d2 + eps);
    p[labels[all[n].index]] += w;
    total += w;
  }
  for (double& v : p) v /= total;
  return p;
}

double brute_eer(std::span<const double> scores,
                 std::span<const std::uint8_t> labels) {
  std::set<double> distinct(scores.begin(), scores.end());
  std::vector<double> thresholds(distinct.begin(), distinct.end());
  thresholds.push_back(std::numeric_limits<double>::infinity());
  std::vector<double> far, frr;
  for (double t : thresholds) {
    double pos = 0, neg = 0, accepted_neg = 0, rejected_pos = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (labels[i] != 0) {
        ++pos;
        if (scores[i] < t) ++rejected_pos;
      } else {
        ++neg;
        if (scores[i] >= t) ++accepted_neg;
      }
    }
    far.push_back(accepted_neg / neg);
    frr.push_back(rejected_pos / pos);
  }
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (frr[i] < far[i]) continue;
    if (frr[i] == far[i]) return far[i];
    // Crossing between i−1 and i: solve FRR = FAR on the segment.
    const double a = frr[i - 1] - far[i - 1];
    const double b = frr[i] - far[i];
    const double lambda = a / (a - b);
    return far[i - 1] + lambda * (far[i] - far[i - 1]);
  }
  return 1.0;
}

std::vector<double> eigenvalues_desc(const Tensor& symmetric) {
  const auto n = static_cast<Eigen::Index>(symmetric.rows());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      m(i, j) = symmetric.at(static_cast<std::size_t>(i),
                             static_cast<std::size_t>(j));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  const Eigen::VectorXd values = solver.eigenvalues();
  std::vector<double> out(values.data(), values.data() + values.size());
  std::sort(out.rbegin(), out.rend());
  return out;
}

Tensor covariance(const Tensor& points) {
  const std::size_t m = points.rows();
  const std::size_t d = points.cols();
  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < d; ++j) mean[j] += points.at(i, j) / m;
  }
  Tensor cov({d, d});
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        s += (points.at(i, a) - mean[a]) * (points.at(i, b) - mean[b]);
      }
      cov.at(a, b) = s / static_cast<double>(m - 1);
    }
  }
  return cov;
}

TempDir::TempDir() {
  static std::atomic<unsigned> counter{0};
  const auto stamp =
      std::chrono::steady_clock::now().time_since_epoch().count();
  path_ = std::filesystem::temp_directory_path() /
          ("sgnl-test-" + std::to_string(stamp) + "-" +
           std::to_string(counter++));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(SGNL_FIXTURE_DIR) / name;
}

}  // namespace sgnl::testkit
