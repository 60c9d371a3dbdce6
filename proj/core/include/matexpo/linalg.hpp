// Copyright 2026 The matexpo Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>

#include "matexpo/matrix.hpp"
#include "matexpo/tile_config.hpp"

namespace matexpo {

struct ErrorMetrics {
  double max_abs = 0.0;
  double max_rel = 0.0;        // max_abs / max |reference|
  double frobenius_rel = 0.0;  // ||result - reference||_F / ||reference||_F
};

Matrix identity(std::size_t n, DType dtype);

// Elements uniform in [lo, hi), drawn row-major from SplitMix64(seed).
// For f32 the double sample is rounded to float and nudged back into the
// half-open range when rounding lands on hi (or below lo).
Matrix random_matrix(std::size_t n, DType dtype, std::uint64_t seed, double lo = -0.5, double hi = 0.5);

// c(i,j) = sum_k a(i,k) * b(k,j), k ascending, accumulated in the element type.
Matrix matmul_naive(const Matrix& a, const Matrix& b);

// Blocked multiply following the work-group tiling of TileConfig.
// vector_width 1 keeps the per-element ascending-k summation, so the result
// is bitwise identical to matmul_naive. vector_width 4 accumulates k into
// lanes k % 4 and reduces them with reduce_lanes().
Matrix matmul_tiled(const Matrix& a, const Matrix& b, const TileConfig& cfg);

ErrorMetrics compare(const Matrix& result, const Matrix& reference);

// Shared by the host kernel and the simulator so both reduce identically.
template <class T>
constexpr T reduce_lanes(const T* lanes) noexcept {
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

// Throws a shape error unless a and b have the same order and dtype.
void check_same_shape(const Matrix& a, const Matrix& b);

}  // namespace matexpo
