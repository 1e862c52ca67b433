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

#include <numeric>

#include "doctest.h"
#include "sgnl/errors.hpp"
#include "sgnl/knn.hpp"
#include "testkit.hpp"

using namespace sgnl;

namespace {

struct Instance {
  Tensor latents;
  std::vector<std::size_t> labels;
  std::size_t classes;
  std::size_t k;
};

Instance random_instance(Rng& rng) {
  const std::size_t m = 1 + rng.below(50);
  const std::size_t d = 1 + rng.below(8);
  Instance inst{testkit::random_tensor({m, d}, rng, 3.0), {}, 1 + rng.below(5),
                1 + rng.below(m)};
  for (std::size_t i = 0; i < m; ++i) {
    inst.labels.push_back(rng.below(inst.classes));
  }
  // Exact duplicates exercise the lower-index tie rule.
  if (m > 2 && rng.below(2) == 0) {
    std::copy(inst.latents.row(0).begin(), inst.latents.row(0).end(),
              inst.latents.row(m - 1).begin());
  }
  return inst;
}

}  // namespace

TEST_CASE("predictions equal the brute-force oracle") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const Instance inst = random_instance(rng);
    const KnnIndex index =
        KnnIndex::fit(inst.latents, inst.labels, inst.classes, inst.k, 1e-8);
    auto z = testkit::random_vector(inst.latents.cols(), rng, 3.0);
    if (trial % 4 == 0) {
      std::copy(inst.latents.row(0).begin(), inst.latents.row(0).end(),
                z.begin());
    }
    const auto got = index.predict(z);
    const auto expect = testkit::brute_knn(inst.latents, inst.labels,
                                           inst.classes, inst.k, 1e-8, z);
    for (std::size_t c = 0; c < inst.classes; ++c) {
      CHECK(std::abs(got[c] - expect[c]) <= 1e-12);
    }
  }
}

TEST_CASE("equidistant neighbours resolve to the lower index") {
  // z = 0; points at ±1 are equidistant; K = 1 must pick record 0.
  const Tensor latents({2, 1}, {1.0, -1.0});
  const KnnIndex index = KnnIndex::fit(latents, {1, 0}, 2, 1);
  const auto p = index.predict(std::vector<double>{0.0});
  CHECK(p == std::vector<double>{0.0, 1.0});
}

TEST_CASE("weights are inverse squared distance") {
  const Tensor latents({2, 1}, {1.0, 2.0});
  const KnnIndex index = KnnIndex::fit(latents, {0, 1}, 2, 2, 1e-8);
  const auto p = index.predict(std::vector<double>{0.0});
  const double w0 = 1.0 / (1.0 + 1e-8), w1 = 1.0 / (4.0 + 1e-8);
  CHECK(p[0] == doctest::Approx(w0 / (w0 + w1)).epsilon(1e-15));
  CHECK(p[1] == doctest::Approx(w1 / (w0 + w1)).epsilon(1e-15));
}

TEST_CASE("an exact hit dominates without dividing by zero") {
  const Tensor latents({3, 2}, {0.0, 0.0, 5.0, 5.0, -5.0, 5.0});
  const KnnIndex index = KnnIndex::fit(latents, {2, 0, 1}, 3, 3);
  const auto p = index.predict(std::vector<double>{0.0, 0.0});
  CHECK(p[2] > 1.0 - 1e-8);
  CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0));
}

TEST_CASE("translating stored and query points together changes nothing") {
  Rng rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    const Instance inst = random_instance(rng);
    const auto z = testkit::random_vector(inst.latents.cols(), rng, 3.0);
    const auto shift = testkit::random_vector(inst.latents.cols(), rng, 0.5);
    Tensor moved = inst.latents;
    for (std::size_t i = 0; i < moved.rows(); ++i) axpy(1.0, shift, moved.row(i));
    auto z_moved = z;
    axpy(1.0, shift, z_moved);
    const auto a = KnnIndex::fit(inst.latents, inst.labels, inst.classes, inst.k)
                       .predict(z);
    const auto b =
        KnnIndex::fit(moved, inst.labels, inst.classes, inst.k).predict(z_moved);
    for (std::size_t c = 0; c < a.size(); ++c) {
      CHECK(b[c] == doctest::Approx(a[c]).epsilon(1e-9));
    }
  }
}

TEST_CASE("fit validates its inputs") {
  const Tensor latents({2, 1}, {0.0, 1.0});
  CHECK_THROWS_AS(KnnIndex::fit(latents, {0, 1}, 2, 0), ValidationError);
  CHECK_THROWS_AS(KnnIndex::fit(latents, {0, 1}, 2, 3), ValidationError);
  CHECK_THROWS_AS(KnnIndex::fit(latents, {0, 2}, 2, 1), ValidationError);
  CHECK_THROWS_AS(KnnIndex::fit(latents, {0}, 2, 1), ValidationError);
  CHECK_THROWS_AS(KnnIndex::fit(latents, {0, 1}, 2, 1, 0.0), ValidationError);
  CHECK_THROWS_AS(KnnIndex::fit(Tensor({0, 1}), {}, 2, 1), ValidationError);
}
