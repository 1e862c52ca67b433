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

#pragma once

#include <array>
#include <cstdint>

#include "sgnl/tensor.hpp"

namespace sgnl {

struct PcaResult {
  Tensor projection;             // [M × 2]
  Tensor components;             // [2 × D], unit rows
  std::array<double, 2> variances{};  // eigenvalues of the sample covariance
};

/// Mean-centred projection onto the top two principal directions of the
/// sample covariance (divisor M−1), found by power iteration with deflation
/// from a seeded start (tolerance 1e-9). Each component is signed so its
/// largest-magnitude entry is positive. Throws ValidationError for M < 2,
/// D < 2, non-finite input, or all points identical.
PcaResult pca_project(const Tensor& points, std::uint64_t seed = 0);

}  // namespace sgnl
