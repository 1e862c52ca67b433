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

#include "doctest.h"
#include "sgnl/errors.hpp"
#include "sgnl/pca.hpp"
#include "testkit.hpp"

using namespace sgnl;

namespace {

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double column_variance(const Tensor& t, std::size_t col) {
  double mean = 0.0;
  for (std::size_t i = 0; i < t.rows(); ++i) mean += t.at(i, col);
  mean /= static_cast<double>(t.rows());
  double s = 0.0;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    s += (t.at(i, col) - mean) * (t.at(i, col) - mean);
  }
  return s / static_cast<double>(t.rows() - 1);
}

}  // namespace

TEST_CASE("a planar cloud keeps its pairwise distances") {
  Rng rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 3 + rng.below(10);
    const std::size_t m = 3 + rng.below(40);
    // Orthonormal u, v by Gram-Schmidt.
    auto u = testkit::random_vector(d, rng);
    auto v = testkit::random_vector(d, rng);
    const double nu = std::sqrt(dot(u, u));
    for (double& x : u) x /= nu;
    axpy(-dot(u, v), u, v);
    const double nv = std::sqrt(dot(v, v));
    for (double& x : v) x /= nv;
    const auto offset = testkit::random_vector(d, rng, 4.0);
    Tensor points({m, d});
    for (std::size_t i = 0; i < m; ++i) {
      const double a = rng.uniform(-3.0, 3.0), b = rng.uniform(-1.0, 1.0);
      for (std::size_t j = 0; j < d; ++j) {
        points.at(i, j) = offset[j] + a * u[j] + b * v[j];
      }
    }
    const PcaResult r = pca_project(points, 7);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t k = i + 1; k < m; ++k) {
        CHECK(std::abs(distance(r.projection.row(i), r.projection.row(k)) -
                       distance(points.row(i), points.row(k))) <= 1e-6);
      }
    }
  }
}

TEST_CASE("variances match an independent eigensolver") {
  Rng rng(62);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 2 + rng.below(7);
    const std::size_t m = d + 2 + rng.below(60);
    Tensor points({m, d});
    for (std::size_t j = 0; j < d; ++j) {
      const double spread = 0.2 + 3.0 * rng.uniform();
      for (std::size_t i = 0; i < m; ++i) points.at(i, j) = spread * rng.normal();
    }
    const PcaResult r = pca_project(points, 3);
    const auto eig = testkit::eigenvalues_desc(testkit::covariance(points));
    CHECK(std::abs(r.variances[0] - eig[0]) <= 1e-6);
    CHECK(std::abs(r.variances[1] - eig[1]) <= 1e-6);
    CHECK(r.variances[0] >= r.variances[1]);
    CHECK(std::abs(column_variance(r.projection, 0) - r.variances[0]) <= 1e-6);
    CHECK(std::abs(column_variance(r.projection, 1) - r.variances[1]) <= 1e-6);
    CHECK(std::abs(dot(r.components.row(0), r.components.row(1))) <= 1e-6);
  }
}

TEST_CASE("the seed does not change the answer") {
  Rng rng(63);
  const Tensor points = testkit::random_tensor({40, 6}, rng);
  const PcaResult a = pca_project(points, 1);
  const PcaResult b = pca_project(points, 99);
  CHECK(a.variances[0] == doctest::Approx(b.variances[0]).epsilon(1e-9));
  for (std::size_t i = 0; i < 40; ++i) {
    CHECK(a.projection.at(i, 0) ==
          doctest::Approx(b.projection.at(i, 0)).epsilon(1e-6));
  }
}

TEST_CASE("rank-one data still yields two orthonormal components") {
  Tensor points({5, 3});
  for (std::size_t i = 0; i < 5; ++i) {
    points.at(i, 0) = static_cast<double>(i);
    points.at(i, 1) = 2.0 * static_cast<double>(i);
  }
  const PcaResult r = pca_project(points);
  CHECK(r.variances[0] == doctest::Approx(5.0 * 2.5));
  CHECK(std::abs(r.variances[1]) <= 1e-9);
  CHECK(std::abs(dot(r.components.row(0), r.components.row(1))) <= 1e-9);
  CHECK(dot(r.components.row(1), r.components.row(1)) ==
        doctest::Approx(1.0));
}

TEST_CASE("degenerate inputs are rejected") {
  CHECK_THROWS_AS(pca_project(Tensor({1, 3})), ValidationError);
  CHECK_THROWS_AS(pca_project(Tensor({4, 1})), ValidationError);
  Tensor same({4, 3});
  for (double& v : same.data()) v = 2.5;
  CHECK_THROWS_WITH_AS(pca_project(same), doctest::Contains("identical"),
                       ValidationError);
  Tensor bad({3, 2});
  bad.at(1, 1) = std::nan("");
  CHECK_THROWS_AS(pca_project(bad), ValidationError);
}
