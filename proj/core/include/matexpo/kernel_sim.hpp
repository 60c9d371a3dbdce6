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
#include <string>
#include <vector>

#include "matexpo/matrix.hpp"
#include "matexpo/tile_config.hpp"

// Deterministic model of a work-group execution: work-items of one group
// share local memory and are interleaved only at barrier boundaries, i.e.
// every work-item runs its segment between two barriers to completion before
// the next work-item (in schedule order) starts its segment. Work-groups run
// one after another. All global and local accesses are counted, global
// accesses are traced for stride analysis, and every local-memory cell
// carries happens-before metadata for race detection.
namespace matexpo::sim {

inline constexpr std::size_t kDefaultMaxGroupSize = 1024;
inline constexpr std::size_t kDefaultCoalescingRun = 16;

enum class ScheduleKind { kRowMajor, kReversed, kSeededShuffle, kFixed };

// Order in which work-items of a group execute a barrier-delimited segment.
struct Schedule {
  ScheduleKind kind = ScheduleKind::kRowMajor;
  std::uint64_t seed = 0;
  std::vector<std::size_t> order;  // kFixed only: a permutation of flat local ids

  static Schedule row_major() { return {}; }
  static Schedule reversed() { return {ScheduleKind::kReversed, 0, {}}; }
  static Schedule shuffled(std::uint64_t seed) { return {ScheduleKind::kSeededShuffle, seed, {}}; }
  static Schedule fixed(std::vector<std::size_t> order) { return {ScheduleKind::kFixed, 0, std::move(order)}; }

  std::string name() const;
};

// "row-major", "reversed", "shuffle:SEED"
Schedule parse_schedule(const std::string& text);

// How a work-item picks the element it stages from global memory. kRowMajor
// maps consecutive flat ids to consecutive columns of the tile; kColumnStrided
// walks down tile columns instead (a deliberately uncoalesced fixture).
enum class StagingLayout { kRowMajor, kColumnStrided };

struct LaunchGeometry {
  std::size_t global_rows = 0;
  std::size_t global_cols = 0;
  std::size_t group_rows = 0;
  std::size_t group_cols = 0;

  std::size_t group_size() const noexcept { return group_rows * group_cols; }
  std::size_t group_count() const noexcept { return (global_rows / group_rows) * (global_cols / group_cols); }
};

// One work-item per output element; work-group shape equals the tile shape.
LaunchGeometry make_geometry(std::size_t n, const TileConfig& cfg, std::size_t max_group_size = kDefaultMaxGroupSize);

struct TrafficCounts {
  std::uint64_t global_loads = 0;
  std::uint64_t global_stores = 0;
  std::uint64_t local_loads = 0;
  std::uint64_t local_stores = 0;
  std::uint64_t barriers_executed = 0;  // per work-group barrier instance

  friend bool operator==(const TrafficCounts&, const TrafficCounts&) = default;
};

struct CoalescingReport {
  bool coalesced = true;
  std::uint64_t worst_stride_elements = 0;

  friend bool operator==(const CoalescingReport&, const CoalescingReport&) = default;
};

struct TrafficReport {
  TrafficCounts counts;
  CoalescingReport coalescing;

  // "global_loads=32768\n..." one key per line.
  std::string to_key_value() const;
  static std::string csv_header();
  std::string to_csv_row() const;
};

enum class HazardKind { kReadBeforeWrite, kUnorderedRead, kStaleRead, kWriteAfterRead };

std::string to_string(HazardKind kind);

// A local-memory access not ordered by a barrier against a conflicting one.
struct Hazard {
  HazardKind kind;
  std::size_t group;
  std::size_t phase;
  std::size_t item;         // flat local id performing the access
  std::size_t other_item;   // last writer or reader of the cell (== item when none)
  char buffer;              // 'A' or 'B'
  std::size_t cell;
};

struct SimOptions {
  Schedule schedule;
  bool drop_barriers = false;
  StagingLayout staging = StagingLayout::kRowMajor;
  std::size_t coalescing_run_width = kDefaultCoalescingRun;
  std::size_t max_group_size = kDefaultMaxGroupSize;
  std::size_t max_recorded_hazards = 32;
};

struct SimResult {
  Matrix product;
  TrafficReport traffic;
  std::uint64_t hazard_count = 0;
  std::vector<Hazard> hazards;  // first max_recorded_hazards
};

// Runs the phased tiled kernel. Per phase each work-item stages (at most) one
// element of the A tile and one of the B tile into local memory, then
// barrier, then accumulates phase_depth() products from local memory, then
// barrier. With drop_barriers the whole per-item program is a single segment.
SimResult simulate_tiled_matmul(const Matrix& a, const Matrix& b, const TileConfig& cfg, const SimOptions& options = {});

// Unblocked kernel: every work-item streams its row of A and column of B
// straight from global memory.
SimResult simulate_naive_matmul(const Matrix& a, const Matrix& b, std::size_t coalescing_run_width = kDefaultCoalescingRun);

// Closed-form counts for the tiled kernel. With R x C tiles and phase depth K:
//   global_loads  = n^3 (1/R + 1/C)      (2n^3/T for T x T tiles)
//   local_stores  = global_loads
//   local_loads   = 2 n^3
//   global_stores = n^2
//   barriers      = 2 * (n^2 / RC) * (n / K), or 0 without barriers
TrafficCounts predict_traffic(std::size_t n, const TileConfig& cfg, bool drop_barriers = false);

// Stride analysis over the global access pattern of the tiled kernel, without
// running the arithmetic. Work-items are grouped into consecutive runs of
// `run_width` flat local ids; within a run the stride between neighbouring
// items that touch the same access site must be at most one element.
CoalescingReport analyze_coalescing(std::size_t n, const TileConfig& cfg,
                                    std::size_t run_width = kDefaultCoalescingRun,
                                    StagingLayout staging = StagingLayout::kRowMajor);

enum class RaceVerdict { kClean, kRaceDetected };

std::string to_string(RaceVerdict verdict);

struct RaceReport {
  RaceVerdict verdict = RaceVerdict::kClean;
  std::size_t schedules_run = 0;
  bool results_agree = true;
  std::uint64_t hazard_count = 0;
  std::vector<Hazard> hazards;
};

// Runs the kernel on seeded random inputs under row-major, reversed and
// `shuffles` seeded-shuffle schedules. Clean iff every run produced the same
// bits and no happens-before violation was observed.
RaceReport detect_barrier_race(const TileConfig& cfg, std::size_t n, bool drop_barriers, DType dtype = DType::kF64,
                               std::uint64_t seed = 42, std::size_t shuffles = 5);

}  // namespace matexpo::sim
