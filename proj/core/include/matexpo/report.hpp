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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "matexpo/bench.hpp"

namespace matexpo::report {

inline constexpr std::string_view kRowNaiveGpu = "Naïve GPU (In Sec)";
inline constexpr std::string_view kRowSequential = "Sequential CPU (In Sec)";
inline constexpr std::string_view kRowNaiveSpeedup = "Naïve Speed UP";
inline constexpr std::string_view kRowOurs = "Our Approach (In Sec)";
inline constexpr std::string_view kRowOursVsNaive = "Our Approach vs Naïve GPU";

// Which backend plays which role in the speedup table.
//   Sequential CPU : repeated strategy on `sequential_backend`
//   Naive GPU      : repeated strategy on `accelerated_backend`
//   Our Approach   : squared strategy on `accelerated_backend`
// An empty accelerated_backend picks the single non-sequential backend
// present in the records (or the sequential one when it is alone).
struct TableRoles {
  std::string sequential_backend = "naive";
  std::string accelerated_backend;
};

struct TableRow {
  std::string label;
  std::vector<double> values;
  bool is_ratio = false;
};

struct SpeedupTable {
  std::size_t size = 0;
  std::vector<std::uint64_t> powers;  // ascending
  std::vector<TableRow> rows;

  const TableRow& row(std::string_view label) const;
  std::string render() const;
};

// Ratio rounded to two decimals.
double speedup(double slower_seconds, double faster_seconds);

// Table for one matrix size. Throws a table error listing every missing cell
// when the records do not cover the full powers x roles grid.
SpeedupTable build_table(const std::vector<bench::BenchmarkRecord>& records, std::size_t size,
                         const TableRoles& roles = {});

// One rendered table per size present in `records`, ascending by size.
std::string emit_table(const std::vector<bench::BenchmarkRecord>& records, const TableRoles& roles = {});

inline constexpr std::string_view kCsvHeader =
    "size,power,strategy,backend,seconds,multiply_count,transfer_count,max_rel_err,nonfinite";

// Rows ordered by (size, power, strategy, backend). Floating fields use the
// shortest round-trip representation; an unverified error is "skipped".
std::string format_csv(std::vector<bench::BenchmarkRecord> records);
void emit_csv(const std::vector<bench::BenchmarkRecord>& records, const std::filesystem::path& path);
std::vector<bench::BenchmarkRecord> parse_csv(std::string_view text);

struct PlotOptions {
  bool log_scale = false;
  std::string title;  // defaults to a size-based title
  int width = 800;
  int height = 480;
};

// Grouped bar chart (SVG): one group per power, one bar colour per
// strategy/backend series, bar height proportional to the median seconds
// (or to its logarithm on a log axis). Records must all share one size.
std::string render_plot(const std::vector<bench::BenchmarkRecord>& records, const PlotOptions& options = {});
void emit_plot(const std::vector<bench::BenchmarkRecord>& records, const std::filesystem::path& path,
               const PlotOptions& options = {});

}  // namespace matexpo::report
