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

// matexpo: benchmark, verify and simulate matrix exponentiation kernels.
//
// Exit codes: 0 success, 1 validation, 2 runtime failure, 3 verification failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "matexpo/bench.hpp"
#include "matexpo/expo.hpp"
#include "matexpo/kernel_sim.hpp"
#include "matexpo/linalg.hpp"
#include "matexpo/report.hpp"
#include "matexpo/tolerance.hpp"

namespace {

using namespace matexpo;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitVerification = 3;

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kConfig:
    case ErrorKind::kParse:
    case ErrorKind::kTiling:
    case ErrorKind::kLocalMemory:
    case ErrorKind::kInvalidDimension:
    case ErrorKind::kInvalidRange:
    case ErrorKind::kShape:
      return kExitValidation;
    default:
      return kExitRuntime;
  }
}

struct TileFlags {
  std::string tile = "16x16";
  unsigned vector_width = 1;
  unsigned unroll = 1;
  std::size_t local_mem = kDefaultLocalMemBytes;
  bool experimental = false;

  void add_to(CLI::App* app) {
    app->add_option("--tile", tile, "Tile shape RxC")->capture_default_str();
    app->add_option("--vector-width", vector_width, "Accumulator lanes (1 or 4)")->capture_default_str();
    app->add_option("--unroll", unroll, "Inner-loop unroll factor (1, 4, 8, 16)")->capture_default_str();
    app->add_option("--local-mem", local_mem, "Local memory budget in bytes")->capture_default_str();
    app->add_flag("--experimental-tile", experimental, "Allow tile shapes outside the menu");
  }

  TileConfig config() const {
    TileConfig base;
    base.vector_width = vector_width;
    base.unroll_factor = unroll;
    base.local_mem_budget_bytes = local_mem;
    base.experimental = experimental;
    TileConfig cfg = parse_tile(tile, base);
    validate(cfg);
    return cfg;
  }
};

struct BenchFlags {
  std::vector<std::size_t> sizes{64};
  std::vector<std::uint64_t> powers{64, 128, 256, 512, 1024};
  std::vector<std::string> strategies{"repeated", "squared"};
  std::vector<std::string> backends{"tiled"};
  TileFlags tile;
  std::string dtype = "f32";
  std::uint64_t seed = 42;
  std::size_t reps = 5;
  std::size_t oracle_cap = 256;
  std::string csv;
  std::string table;
  std::string plot;
  bool log_scale = false;
  bool quiet = false;
};

void write_text(const std::string& target, const std::string& text) {
  if (target == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(target);
  if (!out) throw Error(ErrorKind::kIo, "cannot open '" + target + "' for writing");
  out << text;
}

int run_bench(const BenchFlags& f) {
  bench::BenchConfig cfg;
  cfg.sizes = f.sizes;
  cfg.powers = f.powers;
  for (const auto& s : f.strategies) cfg.strategies.push_back(parse_strategy(s));
  cfg.backends = f.backends;
  cfg.tile = f.tile.config();
  cfg.dtype = parse_dtype(f.dtype);
  cfg.seed = f.seed;
  cfg.repetitions = f.reps;
  cfg.oracle_cap = f.oracle_cap;
  cfg.include_sequential_baseline = !f.table.empty();
  bench::validate(cfg);

  std::cerr << "# tile=" << cfg.tile.label() << " vector_width=" << cfg.tile.vector_width
            << " unroll=" << cfg.tile.unroll_factor << " dtype=" << to_string(cfg.dtype) << " seed=" << cfg.seed
            << " reps=" << cfg.repetitions << '\n';
  auto progress = [&](const bench::BenchmarkRecord& r) {
    if (f.quiet) return;
    std::cerr << "n=" << r.size << " N=" << r.power << ' ' << to_string(r.strategy) << '/' << r.backend
              << " seconds=" << r.seconds << " multiplies=" << r.multiply_count << '\n';
  };
  const bench::BenchRun run = bench::run_benchmark(cfg, progress);
  for (const auto& fail : run.failures) {
    std::cerr << "FAILED n=" << fail.size << " N=" << fail.power << ' ' << to_string(fail.strategy) << '/'
              << fail.backend << ": " << fail.message << '\n';
  }

  if (!f.csv.empty()) {
    if (f.csv == "-") {
      std::cout << report::format_csv(run.records);
    } else {
      report::emit_csv(run.records, f.csv);
    }
  }
  if (!f.table.empty()) write_text(f.table, report::emit_table(run.records));
  if (!f.plot.empty()) {
    report::PlotOptions opts;
    opts.log_scale = f.log_scale;
    const std::filesystem::path base(f.plot);
    for (std::size_t n : f.sizes) {
      std::vector<bench::BenchmarkRecord> subset;
      for (const auto& r : run.records) {
        if (r.size == n) subset.push_back(r);
      }
      if (subset.empty()) continue;
      std::filesystem::path path = base;
      if (f.sizes.size() > 1) {
        path = base.parent_path() / (base.stem().string() + "_" + std::to_string(n) + base.extension().string());
      }
      report::emit_plot(subset, path, opts);
    }
  }
  return run.failures.empty() ? kExitOk : kExitRuntime;
}

struct VerifyFlags {
  std::size_t size = 64;
  std::uint64_t power = 64;
  std::string backend = "tiled";
  TileFlags tile;
  std::string dtype = "f64";
  std::uint64_t seed = 42;
};

int run_verify(const VerifyFlags& f) {
  const DType dtype = parse_dtype(f.dtype);
  const TileConfig cfg = f.tile.config();
  const Backend backend = make_backend(f.backend, cfg);
  if (f.backend != "naive") {
    TileConfig effective = cfg;
    if (f.backend == "vectorized") effective.vector_width = 4;
    check_tiling(f.size, effective);
    check_budget(effective, dtype);
  }
  if (f.power == 0) throw Error(ErrorKind::kConfig, "verify needs a positive power");

  const Matrix a = random_matrix(f.size, dtype, f.seed);
  ExpoCounters squared_counts;
  const Matrix squared = exponentiate(a, f.power, backend, &squared_counts);
  const Matrix repeated = repeated_exponentiate(a, f.power, naive_backend());
  const ErrorMetrics m = compare(squared, repeated);
  const double bound = tolerance::exponent_bound(f.power, f.size, dtype);
  const bool finite = squared.all_finite() && repeated.all_finite();
  const bool ok = finite && m.max_rel <= bound;

  std::cout << "size=" << f.size << '\n'
            << "power=" << f.power << '\n'
            << "backend=" << backend.name() << '\n'
            << "dtype=" << to_string(dtype) << '\n'
            << "multiply_count=" << squared_counts.multiplies << '\n'
            << "max_abs=" << m.max_abs << '\n'
            << "max_rel=" << m.max_rel << '\n'
            << "frobenius_rel=" << m.frobenius_rel << '\n'
            << "tolerance=" << bound << '\n'
            << "finite=" << (finite ? "true" : "false") << '\n'
            << "verdict=" << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kExitOk : kExitVerification;
}

struct SimulateFlags {
  std::size_t size = 64;
  TileFlags tile;
  bool drop_barriers = false;
  std::string schedule = "row-major";
  std::string staging = "row-major";
  std::size_t run_width = sim::kDefaultCoalescingRun;
  std::string dtype = "f32";
  std::uint64_t seed = 42;
  std::string format = "kv";
  bool detect_race = false;
};

int run_simulate(const SimulateFlags& f) {
  const DType dtype = parse_dtype(f.dtype);
  const TileConfig cfg = f.tile.config();
  sim::SimOptions opt;
  opt.schedule = sim::parse_schedule(f.schedule);
  opt.drop_barriers = f.drop_barriers;
  opt.coalescing_run_width = f.run_width;
  if (f.staging == "row-major") {
    opt.staging = sim::StagingLayout::kRowMajor;
  } else if (f.staging == "column-strided") {
    opt.staging = sim::StagingLayout::kColumnStrided;
  } else {
    throw Error(ErrorKind::kParse, "unknown staging '" + f.staging + "' (expected row-major or column-strided)");
  }
  if (f.format != "kv" && f.format != "csv") throw Error(ErrorKind::kParse, "format must be kv or csv");

  const Matrix a = random_matrix(f.size, dtype, f.seed);
  const Matrix b = random_matrix(f.size, dtype, f.seed + 1);
  const sim::SimResult result = sim::simulate_tiled_matmul(a, b, cfg, opt);

  if (f.format == "csv") {
    std::cout << sim::TrafficReport::csv_header() << '\n' << result.traffic.to_csv_row() << '\n';
  } else {
    std::cout << result.traffic.to_key_value();
    std::cout << "hazards=" << result.hazard_count << '\n';
    const bool matches = cfg.vector_width == 1 ? result.product.bitwise_equal(matmul_naive(a, b))
                                               : result.product.bitwise_equal(matmul_tiled(a, b, cfg));
    std::cout << "matches_host=" << (matches ? "true" : "false") << '\n';
  }
  if (f.detect_race) {
    const sim::RaceReport race = sim::detect_barrier_race(cfg, f.size, f.drop_barriers, dtype, f.seed);
    std::cout << "race_verdict=" << sim::to_string(race.verdict) << '\n'
              << "race_schedules=" << race.schedules_run << '\n'
              << "race_hazards=" << race.hazard_count << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix exponentiation: benchmark, verify and simulate tiled kernels"};
  app.require_subcommand(1);

  BenchFlags bench_flags;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Sweep sizes x powers x strategies x backends");
  bench_cmd->add_option("--sizes", bench_flags.sizes, "Matrix orders")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--powers", bench_flags.powers, "Exponents")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--strategies", bench_flags.strategies, "repeated,squared")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--backend,--backends", bench_flags.backends, "naive, tiled, vectorized")
      ->delimiter(',')
      ->capture_default_str();
  bench_flags.tile.add_to(bench_cmd);
  bench_cmd->add_option("--dtype", bench_flags.dtype, "f32 or f64")->capture_default_str();
  bench_cmd->add_option("--seed", bench_flags.seed)->capture_default_str();
  bench_cmd->add_option("--reps", bench_flags.reps, "Repetitions per point (median reported)")->capture_default_str();
  bench_cmd->add_option("--oracle-cap", bench_flags.oracle_cap, "Largest size verified against the f64 oracle")
      ->capture_default_str();
  bench_cmd->add_option("--csv", bench_flags.csv, "CSV output path ('-' for stdout)");
  bench_cmd->add_option("--table", bench_flags.table, "Speedup table output path ('-' for stdout)");
  bench_cmd->add_option("--plot", bench_flags.plot, "SVG bar chart path (suffixed per size when several)");
  bench_cmd->add_flag("--log-scale", bench_flags.log_scale, "Logarithmic time axis in plots");
  bench_cmd->add_flag("--quiet", bench_flags.quiet, "No per-point progress on stderr");

  VerifyFlags verify_flags;
  CLI::App* verify_cmd = app.add_subcommand("verify", "Compare squared exponentiation against the repeated oracle");
  verify_cmd->add_option("--size", verify_flags.size)->required();
  verify_cmd->add_option("--power", verify_flags.power)->required();
  verify_cmd->add_option("--backend", verify_flags.backend, "naive, tiled, vectorized")->capture_default_str();
  verify_flags.tile.add_to(verify_cmd);
  verify_cmd->add_option("--dtype", verify_flags.dtype)->capture_default_str();
  verify_cmd->add_option("--seed", verify_flags.seed)->capture_default_str();

  SimulateFlags sim_flags;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Run the tiled kernel on the work-group simulator");
  sim_cmd->add_option("--size", sim_flags.size)->required();
  sim_flags.tile.add_to(sim_cmd);
  sim_cmd->add_flag("--drop-barriers", sim_flags.drop_barriers, "Remove both barriers from the kernel");
  sim_cmd->add_option("--schedule", sim_flags.schedule, "row-major, reversed or shuffle:SEED")->capture_default_str();
  sim_cmd->add_option("--staging", sim_flags.staging, "row-major or column-strided")->capture_default_str();
  sim_cmd->add_option("--run-width", sim_flags.run_width, "Work-items per coalescing run")->capture_default_str();
  sim_cmd->add_option("--dtype", sim_flags.dtype)->capture_default_str();
  sim_cmd->add_option("--seed", sim_flags.seed)->capture_default_str();
  sim_cmd->add_option("--format", sim_flags.format, "kv or csv")->capture_default_str();
  sim_cmd->add_flag("--detect-race", sim_flags.detect_race, "Also run the multi-schedule race detector");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (bench_cmd->parsed()) return run_bench(bench_flags);
    if (verify_cmd->parsed()) return run_verify(verify_flags);
    if (sim_cmd->parsed()) return run_simulate(sim_flags);
  } catch (const Error& e) {
    std::cerr << "matexpo: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "matexpo: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
