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

#include "matexpo/bench.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <map>
#include <utility>

#include "matexpo/linalg.hpp"

namespace matexpo::bench {

namespace {

using Clock = std::chrono::steady_clock;

void config_error(const std::string& what) { throw Error(ErrorKind::kConfig, what); }

struct GridEntry {
  Strategy strategy;
  std::string backend_name;
};

std::vector<GridEntry> grid_entries(const BenchConfig& config) {
  std::vector<GridEntry> entries;
  for (Strategy s : config.strategies) {
    for (const auto& b : config.backends) entries.push_back({s, b});
  }
  if (config.include_sequential_baseline) {
    const bool present = std::any_of(entries.begin(), entries.end(), [](const GridEntry& e) {
      return e.strategy == Strategy::kRepeated && e.backend_name == "naive";
    });
    if (!present) entries.push_back({Strategy::kRepeated, "naive"});
  }
  return entries;
}

}  // namespace

void validate(const BenchConfig& config) {
  if (config.sizes.empty()) config_error("no sizes given");
  if (config.powers.empty()) config_error("no powers given");
  if (config.strategies.empty()) config_error("no strategies given");
  if (config.backends.empty()) config_error("no backends given");
  if (config.repetitions == 0) config_error("repetitions must be at least 1");
  if (!(config.value_lo < config.value_hi)) config_error("value range must satisfy lo < hi");
  for (std::size_t n : config.sizes) {
    if (n == 0) config_error("sizes must be positive");
  }
  for (std::uint64_t p : config.powers) {
    if (p == 0) config_error("powers must be positive");
  }
  for (const auto& name : config.backends) {
    try {
      make_backend(name, config.tile);
    } catch (const Error& e) {
      config_error(e.what());
    }
    if (name == "naive") continue;
    TileConfig cfg = config.tile;
    if (name == "vectorized") cfg.vector_width = 4;
    try {
      check_budget(cfg, config.dtype);
      for (std::size_t n : config.sizes) check_tiling(n, cfg);
    } catch (const Error& e) {
      config_error(std::string("backend '") + name + "': " + e.what());
    }
  }
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

double timer_granularity_seconds() {
  static const double granularity = [] {
    auto best = Clock::duration::max();
    for (int i = 0; i < 64; ++i) {
      const auto t0 = Clock::now();
      auto t1 = Clock::now();
      while (t1 == t0) t1 = Clock::now();
      best = std::min(best, t1 - t0);
    }
    return std::chrono::duration<double>(best).count();
  }();
  return granularity;
}

double time_median_seconds(const std::function<void()>& body, std::size_t repetitions) {
  const double floor_seconds = 100.0 * timer_granularity_seconds();
  auto timed = [&](std::size_t calls) {
    const auto t0 = Clock::now();
    for (std::size_t i = 0; i < calls; ++i) body();
    return std::chrono::duration<double>(Clock::now() - t0).count();
  };

  std::size_t calls = 1;
  double first = timed(calls);
  while (first < floor_seconds) {
    calls *= 2;
    first = timed(calls);
  }
  std::vector<double> samples{first / static_cast<double>(calls)};
  for (std::size_t r = 1; r < repetitions; ++r) samples.push_back(timed(calls) / static_cast<double>(calls));
  return std::max(median(std::move(samples)), std::numeric_limits<double>::min());
}

BenchRun run_benchmark(const BenchConfig& config, const ProgressFn& progress) {
  validate(config);
  const std::vector<GridEntry> entries = grid_entries(config);
  std::map<std::string, Backend> backends;
  for (const auto& e : entries) {
    if (!backends.contains(e.backend_name)) backends.emplace(e.backend_name, make_backend(e.backend_name, config.tile));
  }

  BenchRun run;
  for (std::size_t n : config.sizes) {
    const Matrix input = random_matrix(n, config.dtype, config.seed, config.value_lo, config.value_hi);
    const Matrix input64 = input.as(DType::kF64);
    for (std::uint64_t power : config.powers) {
      std::optional<Matrix> oracle;
      for (const auto& entry : entries) {
        const Backend& backend = backends.at(entry.backend_name);
        try {
          BenchmarkRecord rec;
          rec.size = n;
          rec.power = power;
          rec.strategy = entry.strategy;
          rec.backend = backend.name();

          std::optional<Matrix> result;
          ExpoCounters counters;
          rec.seconds = time_median_seconds(
              [&] { result = run_strategy(entry.strategy, input, power, backend, &counters); }, config.repetitions);
          rec.multiply_count = counters.multiplies;
          rec.transfer_count = counters.transfers;
          rec.nonfinite = !result->all_finite();

          if (n <= config.oracle_cap) {
            if (!oracle) oracle = repeated_exponentiate(input64, power, naive_backend());
            rec.max_rel_err = compare(result->as(DType::kF64), *oracle).max_rel;
          }
          if (progress) progress(rec);
          run.records.push_back(std::move(rec));
        } catch (const std::exception& e) {
          run.failures.push_back({n, power, entry.strategy, backend.name(), e.what()});
        }
      }
    }
  }
  return run;
}

}  // namespace matexpo::bench
