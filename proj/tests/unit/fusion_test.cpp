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
#include "sgnl/fusion.hpp"
#include "testkit.hpp"

using namespace sgnl;

TEST_CASE("fusion is the convex combination") {
  const std::vector<double> g{0.7, 0.2, 0.1}, k{0.1, 0.1, 0.8};
  const auto p = fuse(g, k, 0.25);
  CHECK(p[0] == doctest::Approx(0.25 * 0.7 + 0.75 * 0.1));
  CHECK(p[2] == doctest::Approx(0.25 * 0.1 + 0.75 * 0.8));
  CHECK(fuse(g, k, 1.0) == g);
  CHECK(fuse(g, k, 0.0) == k);
  CHECK_THROWS_AS(fuse(g, k, 1.5), ValidationError);
  CHECK_THROWS_AS(fuse(g, std::vector<double>{0.5, 0.5}, 0.5), ValidationError);
  CHECK_THROWS_AS(fuse(g, std::vector<double>{0.5, 0.6, 0.1}, 0.5),
                  ValidationError);
}

TEST_CASE("fused posteriors stay on the simplex") {
  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(10);
    const auto p = fuse(testkit::random_simplex(n, rng),
                        testkit::random_simplex(n, rng), rng.uniform());
    CHECK(std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) <= 1e-9);
    for (double v : p) CHECK(v >= 0.0);
  }
}

TEST_CASE("routing threshold is strict and ties go low") {
  FusionConfig cfg;
  cfg.tau = 0.5;
  CHECK(route(std::vector<double>{0.5, 0.5}, 0.0, cfg) == Decision::seen(0));
  CHECK(route(std::vector<double>{0.49, 0.51}, 0.0, cfg) == Decision::seen(1));
  CHECK(route(std::vector<double>{0.3, 0.3, 0.4}, 0.0, cfg).is_unseen());
  cfg.tau = 1.0;
  CHECK(route(std::vector<double>{1.0, 0.0}, 0.0, cfg) == Decision::seen(0));
  CHECK(route(std::vector<double>{0.999, 0.001}, 0.0, cfg).is_unseen());
}

TEST_CASE("entropy routing only applies when enabled") {
  FusionConfig cfg;
  cfg.tau = 0.1;
  cfg.entropy_tau = 0.2;
  const std::vector<double> p{0.6, 0.4};
  CHECK(route(p, 0.67, cfg) == Decision::seen(0));
  cfg.entropy_routing = true;
  CHECK(route(p, 0.67, cfg).is_unseen());
  CHECK(route(p, 0.2, cfg) == Decision::seen(0));
}

TEST_CASE("unseen routing grows with the threshold") {
  Rng rng(42);
  std::vector<std::vector<double>> ps;
  for (int i = 0; i < 200; ++i) ps.push_back(testkit::random_simplex(4, rng));
  std::vector<bool> previous(ps.size(), false);
  for (double tau = 0.0; tau <= 1.0; tau += 0.05) {
    FusionConfig cfg;
    cfg.tau = tau;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const bool unseen = route(ps[i], 0.0, cfg).is_unseen();
      CHECK((unseen || !previous[i]));
      previous[i] = unseen;
    }
  }
}

TEST_CASE("a dominant shared class survives every alpha") {
  Rng rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.below(5);
    const std::size_t c = rng.below(n);
    auto g = testkit::random_simplex(n, rng);
    auto k = testkit::random_simplex(n, rng);
    for (auto* p : {&g, &k}) {
      for (double& v : *p) v *= 0.2;
      (*p)[c] += 0.8;
    }
    FusionConfig cfg;
    cfg.tau = 0.5;
    for (double alpha = 0.0; alpha <= 1.0; alpha += 0.1) {
      CHECK(route(fuse(g, k, alpha), 0.0, cfg) == Decision::seen(c));
    }
    // p_gnn = p_knn: fusion is a fixed point for every α.
    for (double alpha = 0.0; alpha <= 1.0; alpha += 0.25) {
      const auto p = fuse(g, g, alpha);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(p[i] == doctest::Approx(g[i]).epsilon(1e-15));
      }
    }
  }
}

TEST_CASE("config validation") {
  FusionConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.alpha = -0.1;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg.alpha = 0.5;
  cfg.entropy_routing = true;
  cfg.entropy_tau = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}
