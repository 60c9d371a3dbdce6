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

#include <algorithm>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "matexpo/kernel_sim.hpp"
#include "matexpo/linalg.hpp"

namespace matexpo::sim {
namespace {

TileConfig tile(std::size_t r, std::size_t c, unsigned vw = 1) {
  TileConfig cfg;
  cfg.tile_rows = r;
  cfg.tile_cols = c;
  cfg.vector_width = vw;
  return cfg;
}

TileConfig experimental(std::size_t r, std::size_t c) {
  TileConfig cfg = tile(r, c);
  cfg.experimental = true;
  return cfg;
}

TEST(BudgetTest, MenuTiles) {
  EXPECT_EQ(check_budget(tile(16, 16), DType::kF32), 2048u);
  EXPECT_EQ(check_budget(tile(4, 4), DType::kF32), 128u);
  EXPECT_EQ(check_budget(tile(16, 16), DType::kF64), 4096u);
}

TEST(BudgetTest, OversizedTileCarriesNumbers) {
  try {
    check_budget(experimental(64, 64), DType::kF64);
    FAIL();
  } catch (const LocalMemoryError& e) {
    EXPECT_EQ(e.footprint_bytes(), 65536u);
    EXPECT_EQ(e.budget_bytes(), 16384u);
    EXPECT_EQ(e.kind(), ErrorKind::kLocalMemory);
  }
}

TEST(BudgetTest, MonotoneInAreaAndElementSize) {
  for (auto [r1, c1] : kTileMenu) {
    for (auto [r2, c2] : kTileMenu) {
      if (r1 * c1 <= r2 * c2) {
        EXPECT_LE(local_footprint_bytes(tile(r1, c1), DType::kF32), local_footprint_bytes(tile(r2, c2), DType::kF32));
      }
    }
    EXPECT_LT(local_footprint_bytes(tile(r1, c1), DType::kF32), local_footprint_bytes(tile(r1, c1), DType::kF64));
  }
}

TEST(GeometryTest, TileShapedGroups) {
  const LaunchGeometry g = make_geometry(64, tile(16, 8));
  EXPECT_EQ(g.global_rows, 64u);
  EXPECT_EQ(g.group_rows, 16u);
  EXPECT_EQ(g.group_cols, 8u);
  EXPECT_EQ(g.group_count(), 32u);
  EXPECT_THROW(make_geometry(64, tile(16, 16), 128), Error);
  EXPECT_THROW(make_geometry(60, tile(16, 16)), Error);
}

TEST(SimulateTest, CountsForN64Tile16) {
  const Matrix a = random_matrix(64, DType::kF32, 42);
  const Matrix b = random_matrix(64, DType::kF32, 43);
  const SimResult r = simulate_tiled_matmul(a, b, tile(16, 16));
  EXPECT_EQ(r.traffic.counts.global_loads, 32768u);  // 2 * 64^3 / 16
  EXPECT_EQ(r.traffic.counts.global_stores, 4096u);
  EXPECT_EQ(r.traffic.counts.local_loads, 524288u);  // 2 * 64^3
  EXPECT_EQ(r.traffic.counts.local_stores, 32768u);
  EXPECT_EQ(r.traffic.counts.barriers_executed, 128u);  // 16 groups * 4 phases * 2
  EXPECT_EQ(r.hazard_count, 0u);
}

TEST(SimulateTest, SinglePhaseStagesEveryElementOnce) {
  const Matrix a = random_matrix(16, DType::kF64, 1);
  const SimResult r = simulate_tiled_matmul(a, a, tile(16, 16));
  EXPECT_EQ(r.traffic.counts.global_loads, 512u);
}

// Property: counters equal the closed form for every menu tile and size.
TEST(SimulateTest, PredictionMatchesCounters) {
  for (std::size_t n : {16u, 32u, 64u, 128u}) {
    const Matrix a = random_matrix(n, DType::kF32, n);
    const Matrix b = random_matrix(n, DType::kF32, n + 1);
    for (auto [r, c] : kTileMenu) {
      const SimResult sim = simulate_tiled_matmul(a, b, tile(r, c));
      const TrafficCounts predicted = predict_traffic(n, tile(r, c));
      EXPECT_EQ(sim.traffic.counts, predicted) << "n=" << n << " tile=" << r << "x" << c;
      // Independent closed form n^3 (1/R + 1/C) = n^3 (R + C) / (R C).
      EXPECT_EQ(predicted.global_loads, n * n * n * (r + c) / (r * c));
      EXPECT_EQ(predicted.local_loads, 2 * n * n * n);
      EXPECT_EQ(predicted.global_stores, n * n);
    }
  }
}

TEST(SimulateTest, DroppedBarriersPredictedCounts) {
  const Matrix a = random_matrix(32, DType::kF32, 3);
  SimOptions opt;
  opt.drop_barriers = true;
  const SimResult sim = simulate_tiled_matmul(a, a, tile(8, 16), opt);
  EXPECT_EQ(sim.traffic.counts, predict_traffic(32, tile(8, 16), true));
  EXPECT_EQ(sim.traffic.counts.barriers_executed, 0u);
}

TEST(SimulateTest, NaiveKernelTraffic) {
  const Matrix a = random_matrix(64, DType::kF32, 1);
  const SimResult naive = simulate_naive_matmul(a, a);
  EXPECT_EQ(naive.traffic.counts.global_loads, 524288u);
  EXPECT_EQ(naive.traffic.counts.global_stores, 4096u);
  EXPECT_TRUE(naive.product.bitwise_equal(matmul_naive(a, a)));
  EXPECT_TRUE(naive.traffic.coalescing.coalesced);
  // 16x16 tiling divides global traffic by 16.
  EXPECT_EQ(naive.traffic.counts.global_loads, 16 * predict_traffic(64, tile(16, 16)).global_loads);
}

TEST(SimulateTest, TrafficReductionLawForSquareTiles) {
  for (std::size_t n : {16u, 32u, 64u}) {
    const std::uint64_t unblocked = simulate_naive_matmul(Matrix(n, DType::kF32), Matrix(n, DType::kF32))
                                        .traffic.counts.global_loads;
    for (std::size_t t : {4u, 8u, 16u}) {
      EXPECT_EQ(predict_traffic(n, tile(t, t)).global_loads * t, unblocked);
    }
  }
}

TEST(SimulateTest, MatchesHostTiledBitwise) {
  for (DType dtype : {DType::kF32, DType::kF64}) {
    const Matrix a = random_matrix(32, dtype, 5);
    const Matrix b = random_matrix(32, dtype, 6);
    for (auto [r, c] : kTileMenu) {
      for (unsigned vw : {1u, 4u}) {
        const TileConfig cfg = tile(r, c, vw);
        EXPECT_TRUE(simulate_tiled_matmul(a, b, cfg).product.bitwise_equal(matmul_tiled(a, b, cfg)))
            << r << "x" << c << " vw" << vw;
      }
      EXPECT_TRUE(simulate_tiled_matmul(a, b, tile(r, c)).product.bitwise_equal(matmul_naive(a, b)));
    }
  }
}

TEST(SimulateTest, ScheduleIndependenceWithBarriers) {
  const Matrix a = random_matrix(64, DType::kF32, 42);
  const Matrix b = random_matrix(64, DType::kF32, 43);
  std::vector<Schedule> schedules = {Schedule::row_major(), Schedule::reversed()};
  for (std::uint64_t s = 1; s <= 5; ++s) schedules.push_back(Schedule::shuffled(s));
  for (unsigned vw : {1u, 4u}) {
    const SimResult base = simulate_tiled_matmul(a, b, tile(16, 16, vw));
    for (const Schedule& s : schedules) {
      SimOptions opt;
      opt.schedule = s;
      const SimResult r = simulate_tiled_matmul(a, b, tile(16, 16, vw), opt);
      EXPECT_TRUE(r.product.bitwise_equal(base.product)) << s.name();
      EXPECT_EQ(r.hazard_count, 0u) << s.name();
    }
  }
}

TEST(SimulateTest, ShuffleActuallyPermutes) {
  // Row-major and shuffle:7 must differ in visible order when barriers are
  // dropped (the stale values each item reads depend on the order).
  const Matrix a = random_matrix(16, DType::kF64, 1);
  SimOptions row;
  row.drop_barriers = true;
  SimOptions shuffled = row;
  shuffled.schedule = Schedule::shuffled(7);
  EXPECT_FALSE(simulate_tiled_matmul(a, a, tile(16, 16), row)
                   .product.bitwise_equal(simulate_tiled_matmul(a, a, tile(16, 16), shuffled).product));
}

TEST(SimulateTest, Errors) {
  EXPECT_THROW(simulate_tiled_matmul(Matrix(10, DType::kF32), Matrix(10, DType::kF32), tile(4, 4)), Error);
  TileConfig tight = tile(16, 16);
  tight.local_mem_budget_bytes = 100;
  EXPECT_THROW(simulate_tiled_matmul(Matrix(16, DType::kF32), Matrix(16, DType::kF32), tight), LocalMemoryError);
  SimOptions bad;
  bad.schedule = Schedule::fixed({0, 0, 1, 2});
  EXPECT_THROW(simulate_tiled_matmul(Matrix(2, DType::kF64), Matrix(2, DType::kF64), experimental(2, 2), bad), Error);
}

TEST(ScheduleTest, Parsing) {
  EXPECT_EQ(parse_schedule("row-major").kind, ScheduleKind::kRowMajor);
  EXPECT_EQ(parse_schedule("reversed").kind, ScheduleKind::kReversed);
  const Schedule s = parse_schedule("shuffle:7");
  EXPECT_EQ(s.kind, ScheduleKind::kSeededShuffle);
  EXPECT_EQ(s.seed, 7u);
  EXPECT_EQ(s.name(), "shuffle:7");
  EXPECT_THROW(parse_schedule("shuffle:"), Error);
  EXPECT_THROW(parse_schedule("random"), Error);
}

TEST(CoalescingTest, StandardTileIsCoalesced) {
  const CoalescingReport r = analyze_coalescing(64, tile(16, 16));
  EXPECT_TRUE(r.coalesced);
  EXPECT_EQ(r.worst_stride_elements, 1u);
}

TEST(CoalescingTest, ColumnStridedFixture) {
  for (std::size_t n : {16u, 32u, 64u}) {
    const CoalescingReport r = analyze_coalescing(n, tile(16, 16), 16, StagingLayout::kColumnStrided);
    EXPECT_FALSE(r.coalesced);
    EXPECT_EQ(r.worst_stride_elements, n);
  }
}

TEST(CoalescingTest, SingletonGroup) {
  const CoalescingReport r = analyze_coalescing(8, experimental(1, 1));
  EXPECT_TRUE(r.coalesced);
  EXPECT_EQ(r.worst_stride_elements, 0u);
}

TEST(CoalescingTest, RunsWiderThanTileRowsCrossRows) {
  // A 16-item run over a 4x4 tile spans four tile rows: the jump between rows
  // is n - 3 elements.
  const CoalescingReport wide = analyze_coalescing(64, tile(4, 4), 16);
  EXPECT_FALSE(wide.coalesced);
  EXPECT_EQ(wide.worst_stride_elements, 61u);
  EXPECT_TRUE(analyze_coalescing(64, tile(4, 4), 4).coalesced);
}

TEST(CoalescingTest, AnalysisAgreesWithSimulatorTrace) {
  for (auto [r, c] : kTileMenu) {
    for (StagingLayout layout : {StagingLayout::kRowMajor, StagingLayout::kColumnStrided}) {
      SimOptions opt;
      opt.staging = layout;
      const Matrix a = random_matrix(32, DType::kF32, 1);
      const SimResult sim = simulate_tiled_matmul(a, a, tile(r, c), opt);
      EXPECT_EQ(sim.traffic.coalescing, analyze_coalescing(32, tile(r, c), 16, layout)) << r << "x" << c;
      // Staging layout must not change the arithmetic.
      EXPECT_TRUE(sim.product.bitwise_equal(matmul_naive(a, a)));
    }
  }
}

TEST(RaceTest, IntactKernelIsClean) {
  const RaceReport r = detect_barrier_race(tile(16, 16), 64, false);
  EXPECT_EQ(r.verdict, RaceVerdict::kClean);
  EXPECT_EQ(r.schedules_run, 7u);
  EXPECT_TRUE(r.results_agree);
  EXPECT_EQ(r.hazard_count, 0u);
}

TEST(RaceTest, StrippedBarriersDetected) {
  const RaceReport r = detect_barrier_race(tile(16, 16), 64, true);
  EXPECT_EQ(r.verdict, RaceVerdict::kRaceDetected);
  EXPECT_GT(r.hazard_count, 0u);
  std::set<HazardKind> kinds;
  for (const Hazard& h : r.hazards) kinds.insert(h.kind);
  EXPECT_TRUE(kinds.count(HazardKind::kReadBeforeWrite) == 1 || kinds.count(HazardKind::kUnorderedRead) == 1);
}

TEST(RaceTest, EveryMenuTileRacesWithoutBarriers) {
  for (auto [r, c] : kTileMenu) {
    EXPECT_EQ(detect_barrier_race(tile(r, c), 32, true).verdict, RaceVerdict::kRaceDetected) << r << "x" << c;
    EXPECT_EQ(detect_barrier_race(tile(r, c), 32, false).verdict, RaceVerdict::kClean) << r << "x" << c;
  }
}

TEST(RaceTest, SingleGroupSinglePhaseStillFlagged) {
  EXPECT_EQ(detect_barrier_race(tile(16, 16), 16, true).verdict, RaceVerdict::kRaceDetected);
}

// Exhaustive: all 4! orders of a 2x2 work-group with barriers removed. Every
// order contains a cross-item read that is not ordered after its write.
TEST(RaceTest, ExhaustiveScheduleEnumeration) {
  const Matrix a = random_matrix(2, DType::kF64, 3);
  const Matrix b = random_matrix(2, DType::kF64, 4);
  std::vector<std::size_t> order = {0, 1, 2, 3};
  std::size_t schedules = 0;
  do {
    SimOptions opt;
    opt.drop_barriers = true;
    opt.schedule = Schedule::fixed(order);
    EXPECT_GT(simulate_tiled_matmul(a, b, experimental(2, 2), opt).hazard_count, 0u);
    opt.drop_barriers = false;
    const SimResult intact = simulate_tiled_matmul(a, b, experimental(2, 2), opt);
    EXPECT_EQ(intact.hazard_count, 0u);
    EXPECT_TRUE(intact.product.bitwise_equal(matmul_naive(a, b)));
    ++schedules;
  } while (std::next_permutation(order.begin(), order.end()));
  EXPECT_EQ(schedules, 24u);
}

TEST(RaceTest, DetectionDoesNotDependOnWrongValues) {
  // With zero inputs every schedule computes the right answer, yet the
  // unsynchronised reads are still reported.
  const Matrix z(16, DType::kF32);
  SimOptions opt;
  opt.drop_barriers = true;
  const SimResult r = simulate_tiled_matmul(z, z, tile(16, 16), opt);
  EXPECT_TRUE(r.product.bitwise_equal(z));
  EXPECT_GT(r.hazard_count, 0u);
}

TEST(RaceTest, PrivateCellsNeedNoBarrier) {
  // One work-item per group only ever reads what it wrote itself.
  EXPECT_EQ(detect_barrier_race(experimental(1, 1), 1, true).verdict, RaceVerdict::kClean);
  EXPECT_EQ(detect_barrier_race(experimental(1, 1), 4, true).verdict, RaceVerdict::kClean);
}

TEST(TrafficReportTest, Serialization) {
  TrafficReport r;
  r.counts = {32768, 4096, 524288, 32768, 128};
  r.coalescing = {true, 1};
  EXPECT_EQ(r.to_key_value(),
            "global_loads=32768\nglobal_stores=4096\nlocal_loads=524288\nlocal_stores=32768\n"
            "barriers_executed=128\ncoalesced=true\nworst_stride_elements=1\n");
  EXPECT_EQ(TrafficReport::csv_header(),
            "global_loads,global_stores,local_loads,local_stores,barriers_executed,coalesced,worst_stride_elements");
  EXPECT_EQ(r.to_csv_row(), "32768,4096,524288,32768,128,true,1");
}

}  // namespace
}  // namespace matexpo::sim
