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
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "matexpo/matrix.hpp"
#include "matexpo/tile_config.hpp"

namespace matexpo {

enum class Step { kSquare, kMultiplyBase };

// Left-to-right binary plan for A^power. Executing the steps in order on an
// accumulator initialised to A yields A^power.
struct ExponentPlan {
  std::uint64_t power = 0;
  std::vector<Step> steps;

  std::size_t multiply_count() const noexcept { return steps.size(); }
  std::size_t square_count() const noexcept;
};

// floor(log2 N) + popcount(N) - 1 for N >= 1; 0 for N in {0, 1}.
std::size_t multiply_count_law(std::uint64_t power) noexcept;

ExponentPlan plan_exponentiation(std::uint64_t power);

enum class Strategy { kRepeated, kSquared };

std::string_view to_string(Strategy s) noexcept;
Strategy parse_strategy(std::string_view text);

// Modeled host<->device matrix transfers. Repeated: one readback per kernel
// call, N calls. Squared: one upload plus one final readback, with every plan
// step kept on the device.
std::uint64_t count_transfers(const ExponentPlan& plan, Strategy strategy) noexcept;

// A named multiply routine. Backends are immutable after construction and
// safe to share across threads as long as the wrapped function is.
class Backend {
 public:
  using MultiplyFn = std::function<Matrix(const Matrix&, const Matrix&)>;

  Backend(std::string name, MultiplyFn multiply);

  const std::string& name() const noexcept { return name_; }
  Matrix multiply(const Matrix& a, const Matrix& b) const { return multiply_(a, b); }

 private:
  std::string name_;
  MultiplyFn multiply_;
};

Backend naive_backend();
Backend tiled_backend(const TileConfig& cfg);

// "naive", "tiled" or "vectorized" (tiled with vector_width forced to 4).
Backend make_backend(std::string_view name, const TileConfig& cfg);

struct ExpoCounters {
  std::size_t multiplies = 0;
  std::uint64_t transfers = 0;
};

// A^N by square-and-multiply; A^0 is the identity. `a` is never modified.
// A failing multiply is rethrown as StepError carrying the plan step index.
Matrix exponentiate(const Matrix& a, std::uint64_t power, const Backend& backend,
                    ExpoCounters* counters = nullptr);

// A^N by N - 1 successive right-multiplications by A. N = 0 is rejected.
Matrix repeated_exponentiate(const Matrix& a, std::uint64_t power, const Backend& backend,
                             ExpoCounters* counters = nullptr);

Matrix run_strategy(Strategy strategy, const Matrix& a, std::uint64_t power, const Backend& backend,
                    ExpoCounters* counters = nullptr);

}  // namespace matexpo
