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
#include <optional>
#include <string>
#include <vector>

#include "matexpo/expo.hpp"
#include "matexpo/matrix.hpp"
#include "matexpo/tile_config.hpp"

namespace matexpo::bench {

struct BenchConfig {
  std::vector<std::size_t> sizes;
  std::vector<std::uint64_t> powers;
  std::vector<Strategy> strategies;
  std::vector<std::string> backends;  // "naive", "tiled", "vectorized"
  TileConfig tile;
  DType dtype = DType::kF32;
  std::uint64_t seed = 42;
  std::size_t repetitions = 5;
  std::size_t oracle_cap = 256;  // verify against the f64 oracle only for size <= cap
  double value_lo = -0.5;
  double value_hi = 0.5;
  // Also time repeated/naive at every point: the sequential reference row of
  // the speedup tables.
  bool include_sequential_baseline = false;
};

// Throws a config error describing the first problem found.
void validate(const BenchConfig& config);

struct BenchmarkRecord {
  std::size_t size = 0;
  std::uint64_t power = 0;
  Strategy strategy = Strategy::kSquared;
  std::string backend;
  double seconds = 0.0;  // median over repetitions
  std::size_t multiply_count = 0;
  std::uint64_t transfer_count = 0;
  std::optional<double> max_rel_err;  // nullopt: above the oracle cap
  bool nonfinite = false;

  friend bool operator==(const BenchmarkRecord&, const BenchmarkRecord&) = default;
};

struct PointFailure {
  std::size_t size = 0;
  std::uint64_t power = 0;
  Strategy strategy = Strategy::kSquared;
  std::string backend;
  std::string message;
};

struct BenchRun {
  std::vector<BenchmarkRecord> records;
  std::vector<PointFailure> failures;
};

using ProgressFn = std::function<void(const BenchmarkRecord&)>;

// Sweeps sizes x powers x strategies x backends. The input for a size is
// generated once from the seed and shared by every strategy and backend; input
// generation and oracle verification are outside the timed region.
BenchRun run_benchmark(const BenchConfig& config, const ProgressFn& progress = {});

// Smallest observable steady_clock increment, in seconds.
double timer_granularity_seconds();

// Median wall time of `body`. When one call is shorter than 100 timer ticks
// the call is repeated inside the timed region and the total is divided.
double time_median_seconds(const std::function<void()>& body, std::size_t repetitions);

double median(std::vector<double> values);

}  // namespace matexpo::bench
