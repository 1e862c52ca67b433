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

#include "sgnl/pca.hpp"

#include <cmath>
#include <vector>

#include "sgnl/errors.hpp"
#include "sgnl/rng.hpp"

namespace sgnl {

namespace {

constexpr double kTolerance = 1e-9;
constexpr std::size_t kMaxIterations = 100000;

double norm(const std::vector<double>& v) {
  return std::sqrt(dot(v, v));
}

void scale(std::vector<double>& v, double s) {
  for (double& x : v) x *= s;
}

std::vector<double> multiply(const Tensor& c, const std::vector<double>& v) {
  std::vector<double> out(v.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = dot(c.row(i), v);
  return out;
}

/// Removes the components along `basis` vectors; returns the residual norm.
double orthogonalize(std::vector<double>& v,
                     const std::vector<std::vector<double>>& basis) {
  for (const auto& b : basis) axpy(-dot(v, b), b, v);
  return norm(v);
}

void fix_sign(std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  }
  if (v[best] < 0.0) scale(v, -1.0);
}

/// Leading unit eigenvector of the symmetric PSD matrix `c`, restricted to
/// the complement of `found`. Returns a zero-eigenvalue direction from the
/// coordinate basis when the restricted matrix vanishes.
std::vector<double> leading_vector(const Tensor& c, double scale_ref,
                                   const std::vector<std::vector<double>>& found,
                                   Rng& rng) {
  const std::size_t d = c.rows();
  std::vector<double> v(d);
  for (double& x : v) x = rng.normal();
  orthogonalize(v, found);
  scale(v, 1.0 / norm(v));
  for (std::size_t it = 0; it < kMaxIterations; ++it) {
    std::vector<double> next = multiply(c, v);
    const double n = orthogonalize(next, found);
    if (n <= 1e-12 * scale_ref) {
      // Null space: any orthonormal completion is an eigenvector.
      for (std::size_t e = 0; e < d; ++e) {
        std::vector<double> unit(d, 0.0);
        unit[e] = 1.0;
        const double r = orthogonalize(unit, found);
        if (r > 1e-6) {
          scale(unit, 1.0 / r);
          return unit;
        }
      }
      throw ValidationError("pca: no orthogonal direction left");
    }
    scale(next, 1.0 / n);
    // Converged up to sign.
    double diff = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      diff = std::max(diff, std::abs(next[i] - v[i]));
    }
    v = std::move(next);
    if (diff < kTolerance) break;
  }
  return v;
}

}  // namespace

PcaResult pca_project(const Tensor& points, std::uint64_t seed) {
  if (points.rank() != 2 || points.rows() < 2 || points.cols() < 2) {
    throw ValidationError("pca needs at least 2 points of dimension >= 2, got " +
                          shape_string(points.dims()));
  }
  if (!points.all_finite()) throw ValidationError("pca: non-finite input");
  const std::size_t m = points.rows();
  const std::size_t d = points.cols();

  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < m; ++i) axpy(1.0, points.row(i), mean);
  scale(mean, 1.0 / static_cast<double>(m));
  Tensor centered({m, d});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      centered.at(i, j) = points.at(i, j) - mean[j];
    }
  }
  Tensor cov = matmul_at(centered, centered);
  for (double& x : cov.data()) x /= static_cast<double>(m - 1);

  double trace = 0.0;
  for (std::size_t i = 0; i < d; ++i) trace += cov.at(i, i);
  if (!(trace > 0.0)) {
    throw ValidationError("pca: degenerate input, all points are identical");
  }

  Rng rng(seed);
  std::vector<std::vector<double>> found;
  PcaResult result;
  result.components = Tensor({2, d});
  for (std::size_t k = 0; k < 2; ++k) {
    std::vector<double> v = leading_vector(cov, trace, found, rng);
    fix_sign(v);
    result.variances[k] = std::max(0.0, dot(v, multiply(cov, v)));
    std::copy(v.begin(), v.end(), result.components.row(k).begin());
    found.push_back(std::move(v));
  }
  result.projection = matmul_bt(centered, result.components);
  return result;
}

}  // namespace sgnl
