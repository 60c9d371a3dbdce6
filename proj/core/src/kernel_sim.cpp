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

#include "matexpo/kernel_sim.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <sstream>
#include <span>

#include "matexpo/linalg.hpp"
#include "matexpo/random.hpp"

namespace matexpo::sim {

std::string Schedule::name() const {
  switch (kind) {
    case ScheduleKind::kRowMajor: return "row-major";
    case ScheduleKind::kReversed: return "reversed";
    case ScheduleKind::kSeededShuffle: return "shuffle:" + std::to_string(seed);
    case ScheduleKind::kFixed: return "fixed";
  }
  return "unknown";
}

Schedule parse_schedule(const std::string& text) {
  if (text == "row-major" || text == "row_major") return Schedule::row_major();
  if (text == "reversed") return Schedule::reversed();
  constexpr std::string_view kPrefix = "shuffle:";
  if (text.rfind(kPrefix, 0) == 0) {
    std::uint64_t seed = 0;
    const char* first = text.data() + kPrefix.size();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, seed);
    if (ec == std::errc() && ptr == last && first != last) return Schedule::shuffled(seed);
  }
  throw Error(ErrorKind::kParse, "unknown schedule '" + text + "' (expected row-major, reversed or shuffle:SEED)");
}

LaunchGeometry make_geometry(std::size_t n, const TileConfig& cfg, std::size_t max_group_size) {
  validate(cfg);
  check_tiling(n, cfg);
  if (cfg.group_size() > max_group_size) {
    throw Error(ErrorKind::kTiling, "work-group of " + std::to_string(cfg.group_size()) +
                                        " items exceeds the maximum work-group size " + std::to_string(max_group_size));
  }
  return {n, n, cfg.tile_rows, cfg.tile_cols};
}

std::string TrafficReport::to_key_value() const {
  std::ostringstream out;
  out << "global_loads=" << counts.global_loads << '\n'
      << "global_stores=" << counts.global_stores << '\n'
      << "local_loads=" << counts.local_loads << '\n'
      << "local_stores=" << counts.local_stores << '\n'
      << "barriers_executed=" << counts.barriers_executed << '\n'
      << "coalesced=" << (coalescing.coalesced ? "true" : "false") << '\n'
      << "worst_stride_elements=" << coalescing.worst_stride_elements << '\n';
  return out.str();
}

std::string TrafficReport::csv_header() {
  return "global_loads,global_stores,local_loads,local_stores,barriers_executed,coalesced,worst_stride_elements";
}

std::string TrafficReport::to_csv_row() const {
  std::ostringstream out;
  out << counts.global_loads << ',' << counts.global_stores << ',' << counts.local_loads << ',' << counts.local_stores
      << ',' << counts.barriers_executed << ',' << (coalescing.coalesced ? "true" : "false") << ','
      << coalescing.worst_stride_elements;
  return out.str();
}

std::string to_string(HazardKind kind) {
  switch (kind) {
    case HazardKind::kReadBeforeWrite: return "read-before-write";
    case HazardKind::kUnorderedRead: return "unordered-read";
    case HazardKind::kStaleRead: return "stale-read";
    case HazardKind::kWriteAfterRead: return "write-after-read";
  }
  return "unknown";
}

std::string to_string(RaceVerdict verdict) { return verdict == RaceVerdict::kClean ? "CLEAN" : "RACE_DETECTED"; }

namespace {

constexpr std::int64_t kNoAccess = -1;

struct Slot {
  bool active = false;
  std::size_t row = 0;
  std::size_t col = 0;
};

// Element of a rows x width tile that work-item `id` stages.
Slot staging_slot(std::size_t id, std::size_t rows, std::size_t width, StagingLayout layout) {
  if (id >= rows * width) return {};
  if (layout == StagingLayout::kRowMajor) return {true, id / width, id % width};
  return {true, id % rows, id / rows};
}

// Folds the strides of one access site (addresses indexed by flat id) into `report`.
void analyze_site(std::span<const std::int64_t> addr, std::size_t run_width, CoalescingReport& report) {
  const std::size_t width = std::max<std::size_t>(run_width, 1);
  for (std::size_t start = 0; start < addr.size(); start += width) {
    const std::size_t end = std::min(addr.size(), start + width);
    std::int64_t prev = kNoAccess;
    for (std::size_t id = start; id < end; ++id) {
      if (addr[id] == kNoAccess) continue;
      if (prev != kNoAccess) {
        const auto stride = static_cast<std::uint64_t>(std::llabs(addr[id] - prev));
        report.worst_stride_elements = std::max(report.worst_stride_elements, stride);
      }
      prev = addr[id];
    }
  }
  report.coalesced = report.worst_stride_elements <= 1;
}

// Global addresses touched by each site of the tiled kernel for one group.
struct GroupAddressing {
  std::size_t n, rows, cols, depth;
  StagingLayout layout;

  std::int64_t a_load(std::size_t bi, std::size_t p, std::size_t id) const {
    const Slot s = staging_slot(id, rows, depth, layout);
    if (!s.active) return kNoAccess;
    return static_cast<std::int64_t>((bi * rows + s.row) * n + p * depth + s.col);
  }
  std::int64_t b_load(std::size_t bj, std::size_t p, std::size_t id) const {
    const Slot s = staging_slot(id, depth, cols, layout);
    if (!s.active) return kNoAccess;
    return static_cast<std::int64_t>((p * depth + s.row) * n + bj * cols + s.col);
  }
  std::int64_t c_store(std::size_t bi, std::size_t bj, std::size_t id) const {
    return static_cast<std::int64_t>((bi * rows + id / cols) * n + bj * cols + id % cols);
  }
};

struct CellMeta {
  std::int64_t writer = kNoAccess;
  std::size_t write_interval = 0;
  std::size_t write_phase = 0;
  std::int64_t reader = kNoAccess;  // last reader within read_interval
  std::size_t read_interval = 0;
  bool multi_reader = false;
};

class HazardLog {
 public:
  explicit HazardLog(std::size_t keep) : keep_(keep) {}

  void add(const Hazard& h) {
    ++count_;
    if (recorded_.size() < keep_) recorded_.push_back(h);
  }
  std::uint64_t count() const { return count_; }
  std::vector<Hazard> take() { return std::move(recorded_); }

 private:
  std::size_t keep_;
  std::uint64_t count_ = 0;
  std::vector<Hazard> recorded_;
};

// Local buffer with happens-before bookkeeping per cell.
template <class T>
class LocalBuffer {
 public:
  LocalBuffer(char name, std::size_t cells) : name_(name), data_(cells, T{0}), meta_(cells) {}

  void write(std::size_t cell, T value, std::size_t item, std::size_t interval, std::size_t phase, std::size_t group,
             HazardLog& log) {
    CellMeta& m = meta_[cell];
    const auto self = static_cast<std::int64_t>(item);
    if (m.reader != kNoAccess && m.read_interval == interval && (m.multi_reader || m.reader != self)) {
      const std::size_t other = m.reader == self ? item : static_cast<std::size_t>(m.reader);
      log.add({HazardKind::kWriteAfterRead, group, phase, item, other, name_, cell});
    }
    data_[cell] = value;
    m.writer = self;
    m.write_interval = interval;
    m.write_phase = phase;
    m.reader = kNoAccess;
    m.multi_reader = false;
  }

  T read(std::size_t cell, std::size_t item, std::size_t interval, std::size_t phase, std::size_t group,
         HazardLog& log) {
    CellMeta& m = meta_[cell];
    const auto self = static_cast<std::int64_t>(item);
    if (m.writer == kNoAccess) {
      log.add({HazardKind::kReadBeforeWrite, group, phase, item, item, name_, cell});
    } else if (m.writer != self && m.write_interval == interval) {
      log.add({HazardKind::kUnorderedRead, group, phase, item, static_cast<std::size_t>(m.writer), name_, cell});
    } else if (m.write_phase != phase) {
      log.add({HazardKind::kStaleRead, group, phase, item, static_cast<std::size_t>(m.writer), name_, cell});
    }
    if (m.reader == kNoAccess || m.read_interval != interval) {
      m.reader = self;
      m.read_interval = interval;
      m.multi_reader = false;
    } else if (m.reader != self) {
      m.multi_reader = true;
    }
    return data_[cell];
  }

  // Fresh group: local memory contents and history are reset.
  void reset() {
    std::fill(data_.begin(), data_.end(), T{0});
    std::fill(meta_.begin(), meta_.end(), CellMeta{});
  }

 private:
  char name_;
  std::vector<T> data_;
  std::vector<CellMeta> meta_;
};

class OrderSource {
 public:
  OrderSource(const Schedule& schedule, std::size_t group_size) : schedule_(schedule), size_(group_size) {
    if (schedule_.kind == ScheduleKind::kFixed) {
      std::vector<std::size_t> sorted = schedule_.order;
      std::sort(sorted.begin(), sorted.end());
      std::vector<std::size_t> ids(size_);
      std::iota(ids.begin(), ids.end(), std::size_t{0});
      if (sorted != ids) throw Error(ErrorKind::kConfig, "fixed schedule must be a permutation of the work-group ids");
    }
  }

  std::vector<std::size_t> order(std::size_t group, std::size_t interval) const {
    std::vector<std::size_t> ids(size_);
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    switch (schedule_.kind) {
      case ScheduleKind::kRowMajor: break;
      case ScheduleKind::kReversed: std::reverse(ids.begin(), ids.end()); break;
      case ScheduleKind::kSeededShuffle: {
        SplitMix64 rng(schedule_.seed ^ (0x9E3779B97F4A7C15ULL * (group + 1)) ^ (0xD1B54A32D192ED03ULL * (interval + 1)));
        shuffle(ids, rng);
        break;
      }
      case ScheduleKind::kFixed: ids = schedule_.order; break;
    }
    return ids;
  }

 private:
  const Schedule& schedule_;
  std::size_t size_;
};

template <class T>
SimResult run_tiled(std::span<const T> a, std::span<const T> b, std::size_t n, const TileConfig& cfg,
                    const SimOptions& opt) {
  const LaunchGeometry geo = make_geometry(n, cfg, opt.max_group_size);
  const std::size_t rows = cfg.tile_rows;
  const std::size_t cols = cfg.tile_cols;
  const std::size_t depth = cfg.phase_depth();
  const std::size_t phases = n / depth;
  const std::size_t items = geo.group_size();
  const std::size_t lanes = cfg.vector_width;
  const GroupAddressing addressing{n, rows, cols, depth, opt.staging};
  const OrderSource orders(opt.schedule, items);

  Matrix product(n, dtype_of<T>());
  std::span<T> out = product.values<T>();
  TrafficCounts counts;
  CoalescingReport coalescing;
  HazardLog log(opt.max_recorded_hazards);

  // Both buffers are provisioned at rows * cols cells (see TileConfig).
  LocalBuffer<T> a_local('A', rows * cols);
  LocalBuffer<T> b_local('B', rows * cols);
  std::vector<T> acc(items * lanes);
  std::vector<std::int64_t> a_trace(phases * items);
  std::vector<std::int64_t> b_trace(phases * items);
  std::vector<std::int64_t> c_trace(items);

  std::size_t group = 0;
  for (std::size_t bi = 0; bi < n / rows; ++bi) {
    for (std::size_t bj = 0; bj < n / cols; ++bj, ++group) {
      a_local.reset();
      b_local.reset();
      std::fill(acc.begin(), acc.end(), T{0});
      std::fill(a_trace.begin(), a_trace.end(), kNoAccess);
      std::fill(b_trace.begin(), b_trace.end(), kNoAccess);
      std::size_t interval = 0;

      auto stage = [&](std::size_t id, std::size_t p) {
        const std::int64_t ga = addressing.a_load(bi, p, id);
        if (ga != kNoAccess) {
          const Slot s = staging_slot(id, rows, depth, opt.staging);
          a_local.write(s.row * depth + s.col, a[static_cast<std::size_t>(ga)], id, interval, p, group, log);
          ++counts.global_loads;
          ++counts.local_stores;
          a_trace[p * items + id] = ga;
        }
        const std::int64_t gb = addressing.b_load(bj, p, id);
        if (gb != kNoAccess) {
          const Slot s = staging_slot(id, depth, cols, opt.staging);
          b_local.write(s.row * cols + s.col, b[static_cast<std::size_t>(gb)], id, interval, p, group, log);
          ++counts.global_loads;
          ++counts.local_stores;
          b_trace[p * items + id] = gb;
        }
      };
      auto compute = [&](std::size_t id, std::size_t p) {
        const std::size_t ty = id / cols;
        const std::size_t tx = id % cols;
        for (std::size_t k = 0; k < depth; ++k) {
          const T x = a_local.read(ty * depth + k, id, interval, p, group, log);
          const T y = b_local.read(k * cols + tx, id, interval, p, group, log);
          if (lanes == 1) {
            acc[id] += x * y;
          } else {
            acc[id * 4 + k % 4] += x * y;
          }
        }
        counts.local_loads += 2 * depth;
      };
      auto store = [&](std::size_t id) {
        const std::int64_t gc = addressing.c_store(bi, bj, id);
        out[static_cast<std::size_t>(gc)] = lanes == 1 ? acc[id] : reduce_lanes(acc.data() + id * 4);
        ++counts.global_stores;
        c_trace[id] = gc;
      };

      if (!opt.drop_barriers) {
        for (std::size_t p = 0; p < phases; ++p) {
          for (std::size_t id : orders.order(group, interval)) stage(id, p);
          ++interval;
          ++counts.barriers_executed;
          for (std::size_t id : orders.order(group, interval)) compute(id, p);
          ++interval;
          ++counts.barriers_executed;
        }
        for (std::size_t id : orders.order(group, interval)) store(id);
      } else {
        for (std::size_t id : orders.order(group, interval)) {
          for (std::size_t p = 0; p < phases; ++p) {
            stage(id, p);
            compute(id, p);
          }
          store(id);
        }
      }

      for (std::size_t p = 0; p < phases; ++p) {
        analyze_site(std::span<const std::int64_t>(a_trace).subspan(p * items, items), opt.coalescing_run_width, coalescing);
        analyze_site(std::span<const std::int64_t>(b_trace).subspan(p * items, items), opt.coalescing_run_width, coalescing);
      }
      analyze_site(c_trace, opt.coalescing_run_width, coalescing);
    }
  }

  return {std::move(product), {counts, coalescing}, log.count(), log.take()};
}

template <class T>
SimResult run_naive(std::span<const T> a, std::span<const T> b, std::size_t n, std::size_t run_width) {
  Matrix product(n, dtype_of<T>());
  std::span<T> out = product.values<T>();
  TrafficCounts counts;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      T sum = 0;
      for (std::size_t k = 0; k < n; ++k) sum += a[i * n + k] * b[k * n + j];
      counts.global_loads += 2 * n;
      out[i * n + j] = sum;
      ++counts.global_stores;
    }
  }
  // Work-items are numbered row-major over the output; for step k item (i, j)
  // reads A[i, k] and B[k, j].
  CoalescingReport coalescing;
  std::vector<std::int64_t> a_addr(n * n);
  std::vector<std::int64_t> b_addr(n * n);
  std::vector<std::int64_t> c_addr(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t id = 0; id < n * n; ++id) {
      a_addr[id] = static_cast<std::int64_t>((id / n) * n + k);
      b_addr[id] = static_cast<std::int64_t>(k * n + id % n);
    }
    analyze_site(a_addr, run_width, coalescing);
    analyze_site(b_addr, run_width, coalescing);
  }
  std::iota(c_addr.begin(), c_addr.end(), std::int64_t{0});
  analyze_site(c_addr, run_width, coalescing);
  return {std::move(product), {counts, coalescing}, 0, {}};
}

}  // namespace

SimResult simulate_tiled_matmul(const Matrix& a, const Matrix& b, const TileConfig& cfg, const SimOptions& options) {
  check_same_shape(a, b);
  validate(cfg);
  check_tiling(a.n(), cfg);
  check_budget(cfg, a.dtype());
  return a.visit([&](auto x) {
    using T = typename decltype(x)::value_type;
    return run_tiled<T>(x, b.values<T>(), a.n(), cfg, options);
  });
}

SimResult simulate_naive_matmul(const Matrix& a, const Matrix& b, std::size_t coalescing_run_width) {
  check_same_shape(a, b);
  return a.visit([&](auto x) {
    using T = typename decltype(x)::value_type;
    return run_naive<T>(x, b.values<T>(), a.n(), coalescing_run_width);
  });
}

TrafficCounts predict_traffic(std::size_t n, const TileConfig& cfg, bool drop_barriers) {
  validate(cfg);
  check_tiling(n, cfg);
  const std::uint64_t rows = cfg.tile_rows;
  const std::uint64_t cols = cfg.tile_cols;
  const std::uint64_t depth = cfg.phase_depth();
  const std::uint64_t m = n;
  const std::uint64_t groups = (m / rows) * (m / cols);
  const std::uint64_t phases = m / depth;
  TrafficCounts t;
  t.global_loads = groups * phases * (rows * depth + depth * cols);
  t.local_stores = t.global_loads;
  t.local_loads = 2 * m * m * m;
  t.global_stores = m * m;
  t.barriers_executed = drop_barriers ? 0 : 2 * groups * phases;
  return t;
}

CoalescingReport analyze_coalescing(std::size_t n, const TileConfig& cfg, std::size_t run_width, StagingLayout staging) {
  const LaunchGeometry geo = make_geometry(n, cfg);
  const std::size_t depth = cfg.phase_depth();
  const GroupAddressing addressing{n, cfg.tile_rows, cfg.tile_cols, depth, staging};
  const std::size_t items = geo.group_size();
  CoalescingReport report;
  std::vector<std::int64_t> addr(items);
  for (std::size_t bi = 0; bi < n / cfg.tile_rows; ++bi) {
    for (std::size_t bj = 0; bj < n / cfg.tile_cols; ++bj) {
      for (std::size_t p = 0; p < n / depth; ++p) {
        for (std::size_t id = 0; id < items; ++id) addr[id] = addressing.a_load(bi, p, id);
        analyze_site(addr, run_width, report);
        for (std::size_t id = 0; id < items; ++id) addr[id] = addressing.b_load(bj, p, id);
        analyze_site(addr, run_width, report);
      }
      for (std::size_t id = 0; id < items; ++id) addr[id] = addressing.c_store(bi, bj, id);
      analyze_site(addr, run_width, report);
    }
  }
  return report;
}

RaceReport detect_barrier_race(const TileConfig& cfg, std::size_t n, bool drop_barriers, DType dtype,
                               std::uint64_t seed, std::size_t shuffles) {
  const Matrix a = random_matrix(n, dtype, seed);
  const Matrix b = random_matrix(n, dtype, seed + 1);

  std::vector<Schedule> schedules = {Schedule::row_major(), Schedule::reversed()};
  for (std::size_t s = 0; s < shuffles; ++s) schedules.push_back(Schedule::shuffled(seed + 1000 + s));

  RaceReport report;
  std::optional<Matrix> first;
  for (const Schedule& schedule : schedules) {
    SimOptions opt;
    opt.schedule = schedule;
    opt.drop_barriers = drop_barriers;
    SimResult run = simulate_tiled_matmul(a, b, cfg, opt);
    ++report.schedules_run;
    report.hazard_count += run.hazard_count;
    for (const Hazard& h : run.hazards) {
      if (report.hazards.size() < opt.max_recorded_hazards) report.hazards.push_back(h);
    }
    if (!first) {
      first = std::move(run.product);
    } else if (!first->bitwise_equal(run.product)) {
      report.results_agree = false;
    }
  }
  report.verdict = (report.results_agree && report.hazard_count == 0) ? RaceVerdict::kClean : RaceVerdict::kRaceDetected;
  return report;
}

}  // namespace matexpo::sim
