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

// Every numerical tolerance used by tests, the acceptance suite and the CLI
// lives here.
namespace matexpo::tolerance {

inline constexpr double kVectorizedSafety = 8.0;
inline constexpr double kAssociativitySafety = 8.0;
inline constexpr double kExponentSafety = 64.0;
inline constexpr double kDeviceSafety = 64.0;

// Unit roundoff u = 2^-p: 2^-24 for f32, 2^-53 for f64.
constexpr double unit_roundoff(DType dtype) noexcept { return dtype == DType::kF32 ? 0x1.0p-24 : 0x1.0p-53; }

// Reassociated (4-lane) dot products vs the sequential sum.
constexpr double vectorized_bound(std::size_t n, DType dtype) noexcept {
  return static_cast<double>(n) * unit_roundoff(dtype) * kVectorizedSafety;
}

// (AB)C vs A(BC).
constexpr double associativity_bound(std::size_t n, DType dtype) noexcept {
  return static_cast<double>(n) * static_cast<double>(n) * unit_roundoff(dtype) * kAssociativitySafety;
}

// Square-and-multiply vs repeated multiply for A^power, and the exponent laws.
constexpr double exponent_bound(std::uint64_t power, std::size_t n, DType dtype) noexcept {
  const double p = power == 0 ? 1.0 : static_cast<double>(power);
  return p * static_cast<double>(n) * unit_roundoff(dtype) * kExponentSafety;
}

// Device multiply vs host oracle (FMA contraction allowed on devices).
constexpr double device_bound(std::size_t n, DType dtype) noexcept {
  return static_cast<double>(n) * unit_roundoff(dtype) * kDeviceSafety;
}

}  // namespace matexpo::tolerance
