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

#include "matexpo/expo.hpp"

#include <algorithm>
#include <bit>
#include <utility>

#include "matexpo/linalg.hpp"

namespace matexpo {

std::size_t ExponentPlan::square_count() const noexcept {
  return static_cast<std::size_t>(std::count(steps.begin(), steps.end(), Step::kSquare));
}

std::size_t multiply_count_law(std::uint64_t power) noexcept {
  if (power <= 1) return 0;
  return static_cast<std::size_t>(std::bit_width(power) - 1 + std::popcount(power) - 1);
}

ExponentPlan plan_exponentiation(std::uint64_t power) {
  ExponentPlan plan;
  plan.power = power;
  if (power <= 1) return plan;
  // The leading bit is the initial accumulator A; scan the rest high to low.
  for (int bit = std::bit_width(power) - 2; bit >= 0; --bit) {
    plan.steps.push_back(Step::kSquare);
    if ((power >> bit) & 1U) plan.steps.push_back(Step::kMultiplyBase);
  }
  return plan;
}

std::string_view to_string(Strategy s) noexcept { return s == Strategy::kRepeated ? "repeated" : "squared"; }

Strategy parse_strategy(std::string_view text) {
  if (text == "repeated") return Strategy::kRepeated;
  if (text == "squared") return Strategy::kSquared;
  throw Error(ErrorKind::kParse, "unknown strategy '" + std::string(text) + "' (expected repeated or squared)");
}

std::uint64_t count_transfers(const ExponentPlan& plan, Strategy strategy) noexcept {
  return strategy == Strategy::kRepeated ? plan.power : 2;
}

Backend::Backend(std::string name, MultiplyFn multiply) : name_(std::move(name)), multiply_(std::move(multiply)) {}

Backend naive_backend() { return Backend("naive", [](const Matrix& a, const Matrix& b) { return matmul_naive(a, b); }); }

Backend tiled_backend(const TileConfig& cfg) {
  validate(cfg);
  const std::string prefix = cfg.vector_width == 4 ? "vectorized:" : "tiled:";
  return Backend(prefix + cfg.label(), [cfg](const Matrix& a, const Matrix& b) { return matmul_tiled(a, b, cfg); });
}

Backend make_backend(std::string_view name, const TileConfig& cfg) {
  if (name == "naive") return naive_backend();
  if (name == "tiled") return tiled_backend(cfg);
  if (name == "vectorized") {
    TileConfig vec = cfg;
    vec.vector_width = 4;
    return tiled_backend(vec);
  }
  throw Error(ErrorKind::kConfig, "unknown backend '" + std::string(name) + "' (expected naive, tiled or vectorized)");
}

namespace {

Matrix checked_step(const Backend& backend, const Matrix& x, const Matrix& y, std::size_t step) {
  try {
    Matrix out = backend.multiply(x, y);
    if (out.n() != x.n() || out.dtype() != x.dtype()) {
      throw Error(ErrorKind::kShape, "backend '" + backend.name() + "' returned a matrix of the wrong shape");
    }
    return out;
  } catch (const StepError&) {
    throw;
  } catch (const std::exception& e) {
    throw StepError(step, e.what());
  }
}

}  // namespace

Matrix exponentiate(const Matrix& a, std::uint64_t power, const Backend& backend, ExpoCounters* counters) {
  const ExponentPlan plan = plan_exponentiation(power);
  if (counters != nullptr) *counters = {0, count_transfers(plan, Strategy::kSquared)};
  if (power == 0) return identity(a.n(), a.dtype());

  Matrix acc = a;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    acc = plan.steps[i] == Step::kSquare ? checked_step(backend, acc, acc, i) : checked_step(backend, acc, a, i);
    if (counters != nullptr) ++counters->multiplies;
  }
  return acc;
}

Matrix repeated_exponentiate(const Matrix& a, std::uint64_t power, const Backend& backend, ExpoCounters* counters) {
  if (power == 0) throw Error(ErrorKind::kUnsupported, "the repeated-multiply baseline has no zero power");
  if (counters != nullptr) *counters = {0, count_transfers(ExponentPlan{power, {}}, Strategy::kRepeated)};
  Matrix acc = a;
  for (std::uint64_t i = 1; i < power; ++i) {
    acc = checked_step(backend, acc, a, static_cast<std::size_t>(i - 1));
    if (counters != nullptr) ++counters->multiplies;
  }
  return acc;
}

Matrix run_strategy(Strategy strategy, const Matrix& a, std::uint64_t power, const Backend& backend,
                    ExpoCounters* counters) {
  return strategy == Strategy::kRepeated ? repeated_exponentiate(a, power, backend, counters)
                                         : exponentiate(a, power, backend, counters);
}

}  // namespace matexpo
