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

#include "matexpo/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "matexpo/matrix_io.hpp"

namespace matexpo::report {

using bench::BenchmarkRecord;

const TableRow& SpeedupTable::row(std::string_view label) const {
  for (const auto& r : rows) {
    if (r.label == label) return r;
  }
  throw Error(ErrorKind::kTable, "no row labelled '" + std::string(label) + "'");
}

namespace {

std::string format_cell(double v, bool is_ratio) {
  std::ostringstream out;
  if (is_ratio) {
    out << std::fixed << std::setprecision(2) << v;
  } else {
    out << std::setprecision(4) << v;
  }
  return out.str();
}

// Display width of a UTF-8 string (code points, not bytes).
std::size_t display_width(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) {
    return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
  }));
}

std::string pad_right(const std::string& s, std::size_t width) {
  const std::size_t w = display_width(s);
  return w >= width ? s : s + std::string(width - w, ' ');
}

std::string pad_left(const std::string& s, std::size_t width) {
  const std::size_t w = display_width(s);
  return w >= width ? s : std::string(width - w, ' ') + s;
}

}  // namespace

std::string SpeedupTable::render() const {
  std::size_t label_width = 0;
  for (const auto& r : rows) label_width = std::max(label_width, display_width(r.label));
  std::vector<std::vector<std::string>> cells(rows.size());
  std::size_t cell_width = 0;
  for (std::uint64_t p : powers) cell_width = std::max(cell_width, std::to_string(p).size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (double v : rows[i].values) {
      cells[i].push_back(format_cell(v, rows[i].is_ratio));
      cell_width = std::max(cell_width, cells[i].back().size());
    }
  }

  std::ostringstream out;
  out << "Exponentiation of Matrix of Size " << size << " by " << size << '\n';
  out << pad_right("Power", label_width);
  for (std::uint64_t p : powers) out << "  " << pad_left(std::to_string(p), cell_width);
  out << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << pad_right(rows[i].label, label_width);
    for (const auto& c : cells[i]) out << "  " << pad_left(c, cell_width);
    out << '\n';
  }
  return out.str();
}

double speedup(double slower_seconds, double faster_seconds) {
  return std::round(slower_seconds / faster_seconds * 100.0) / 100.0;
}

SpeedupTable build_table(const std::vector<BenchmarkRecord>& records, std::size_t size, const TableRoles& roles) {
  std::set<std::uint64_t> powers;
  std::set<std::string> backends;
  std::map<std::tuple<std::uint64_t, Strategy, std::string>, double> seconds;
  for (const auto& r : records) {
    if (r.size != size) continue;
    powers.insert(r.power);
    backends.insert(r.backend);
    seconds[{r.power, r.strategy, r.backend}] = r.seconds;
  }
  if (powers.empty()) throw Error(ErrorKind::kTable, "no records for size " + std::to_string(size));

  std::string accelerated = roles.accelerated_backend;
  if (accelerated.empty()) {
    std::vector<std::string> others;
    for (const auto& b : backends) {
      if (b != roles.sequential_backend) others.push_back(b);
    }
    if (others.size() > 1) {
      throw Error(ErrorKind::kTable, "several candidate accelerated backends for size " + std::to_string(size) +
                                         "; name one explicitly");
    }
    accelerated = others.empty() ? roles.sequential_backend : others.front();
  }

  SpeedupTable table;
  table.size = size;
  table.powers.assign(powers.begin(), powers.end());

  std::vector<std::string> missing;
  auto lookup = [&](std::uint64_t p, Strategy s, const std::string& backend) {
    auto it = seconds.find({p, s, backend});
    if (it == seconds.end()) {
      missing.push_back("power " + std::to_string(p) + " " + std::string(to_string(s)) + "/" + backend);
      return 0.0;
    }
    return it->second;
  };

  TableRow naive_gpu{std::string(kRowNaiveGpu), {}, false};
  TableRow sequential{std::string(kRowSequential), {}, false};
  TableRow naive_speedup{std::string(kRowNaiveSpeedup), {}, true};
  TableRow ours{std::string(kRowOurs), {}, false};
  TableRow ours_vs_naive{std::string(kRowOursVsNaive), {}, true};
  for (std::uint64_t p : table.powers) {
    const double gpu = lookup(p, Strategy::kRepeated, accelerated);
    const double seq = lookup(p, Strategy::kRepeated, roles.sequential_backend);
    const double fast = lookup(p, Strategy::kSquared, accelerated);
    naive_gpu.values.push_back(gpu);
    sequential.values.push_back(seq);
    ours.values.push_back(fast);
    naive_speedup.values.push_back(gpu > 0 ? speedup(seq, gpu) : 0.0);
    ours_vs_naive.values.push_back(fast > 0 ? speedup(gpu, fast) : 0.0);
  }
  if (!missing.empty()) {
    std::string msg = "ragged grid for size " + std::to_string(size) + "; missing cells:";
    for (const auto& m : missing) msg += "\n  " + m;
    throw Error(ErrorKind::kTable, msg);
  }
  table.rows = {naive_gpu, sequential, naive_speedup, ours, ours_vs_naive};
  return table;
}

std::string emit_table(const std::vector<BenchmarkRecord>& records, const TableRoles& roles) {
  std::set<std::size_t> sizes;
  for (const auto& r : records) sizes.insert(r.size);
  std::string out;
  for (std::size_t n : sizes) {
    if (!out.empty()) out += '\n';
    out += build_table(records, n, roles).render();
  }
  return out;
}

namespace {

bool csv_less(const BenchmarkRecord& x, const BenchmarkRecord& y) {
  return std::forward_as_tuple(x.size, x.power, to_string(x.strategy), x.backend) <
         std::forward_as_tuple(y.size, y.power, to_string(y.strategy), y.backend);
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
T parse_number(const std::string& field, std::size_t line) {
  T v{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorKind::kParse, "CSV line " + std::to_string(line) + ": bad number '" + field + "'");
  }
  return v;
}

}  // namespace

std::string format_csv(std::vector<BenchmarkRecord> records) {
  std::stable_sort(records.begin(), records.end(), csv_less);
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.size << ',' << r.power << ',' << to_string(r.strategy) << ',' << r.backend << ','
        << shortest_repr(r.seconds) << ',' << r.multiply_count << ',' << r.transfer_count << ','
        << (r.max_rel_err ? shortest_repr(*r.max_rel_err) : std::string("skipped")) << ','
        << (r.nonfinite ? 1 : 0) << '\n';
  }
  return out.str();
}

void emit_csv(const std::vector<BenchmarkRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "' for writing");
  out << format_csv(records);
  if (!out) throw Error(ErrorKind::kIo, "write to '" + path.string() + "' failed");
}

std::vector<BenchmarkRecord> parse_csv(std::string_view text) {
  std::vector<BenchmarkRecord> records;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw Error(ErrorKind::kParse, "CSV header mismatch");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 9) throw Error(ErrorKind::kParse, "CSV line " + std::to_string(line_no) + ": expected 9 fields");
    BenchmarkRecord r;
    r.size = parse_number<std::size_t>(f[0], line_no);
    r.power = parse_number<std::uint64_t>(f[1], line_no);
    r.strategy = parse_strategy(f[2]);
    r.backend = f[3];
    r.seconds = parse_number<double>(f[4], line_no);
    r.multiply_count = parse_number<std::size_t>(f[5], line_no);
    r.transfer_count = parse_number<std::uint64_t>(f[6], line_no);
    if (f[7] != "skipped") r.max_rel_err = parse_number<double>(f[7], line_no);
    if (f[8] != "0" && f[8] != "1") throw Error(ErrorKind::kParse, "CSV line " + std::to_string(line_no) + ": bad flag");
    r.nonfinite = f[8] == "1";
    records.push_back(std::move(r));
  }
  return records;
}

namespace {

constexpr std::array<const char*, 8> kPalette = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759",
                                                 "#76b7b2", "#edc948", "#b07aa1", "#9c755f"};

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) { return shortest_repr(v); }

}  // namespace

std::string render_plot(const std::vector<BenchmarkRecord>& records, const PlotOptions& options) {
  if (records.empty()) throw Error(ErrorKind::kConfig, "nothing to plot");
  const std::size_t size = records.front().size;
  for (const auto& r : records) {
    if (r.size != size) throw Error(ErrorKind::kConfig, "a plot covers one matrix size; got several");
    if (options.log_scale && !(r.seconds > 0.0)) {
      throw Error(ErrorKind::kInvalidRange, "log axis cannot show the non-positive value " + num(r.seconds) +
                                                " (power " + std::to_string(r.power) + ", " +
                                                std::string(to_string(r.strategy)) + "/" + r.backend + ")");
    }
  }

  std::set<std::uint64_t> power_set;
  std::vector<std::string> series;
  for (const auto& r : records) {
    power_set.insert(r.power);
    const std::string name = std::string(to_string(r.strategy)) + "/" + r.backend;
    if (std::find(series.begin(), series.end(), name) == series.end()) series.push_back(name);
  }
  std::sort(series.begin(), series.end());
  const std::vector<std::uint64_t> powers(power_set.begin(), power_set.end());

  double vmin = records.front().seconds;
  double vmax = records.front().seconds;
  for (const auto& r : records) {
    vmin = std::min(vmin, r.seconds);
    vmax = std::max(vmax, r.seconds);
  }
  double axis_lo = 0.0;
  double axis_hi = vmax > 0.0 ? vmax : 1.0;
  if (options.log_scale) {
    axis_lo = std::floor(std::log10(vmin));
    axis_hi = std::ceil(std::log10(vmax));
    if (axis_hi <= axis_lo) axis_hi = axis_lo + 1.0;
  }

  const double left = 80.0, right = 200.0, top = 50.0, bottom = 60.0;
  const double plot_w = options.width - left - right;
  const double plot_h = options.height - top - bottom;
  const double group_w = plot_w / static_cast<double>(powers.size());
  const double bar_w = group_w * 0.8 / static_cast<double>(series.size());
  auto bar_height = [&](double v) {
    if (options.log_scale) return (std::log10(v) - axis_lo) / (axis_hi - axis_lo) * plot_h;
    return v / axis_hi * plot_h;
  };

  std::ostringstream svg;
  const std::string title =
      options.title.empty() ? "Exponentiation time, matrix " + std::to_string(size) + " by " + std::to_string(size)
                            : options.title;
  svg << R"(<svg xmlns="http://www.w3.org/2000/svg" width=")" << options.width << R"(" height=")" << options.height
      << R"(" viewBox="0 0 )" << options.width << ' ' << options.height << R"(">)" << '\n';
  svg << R"(<rect width="100%" height="100%" fill="white"/>)" << '\n';
  svg << R"(<text x=")" << num(options.width / 2.0) << R"(" y="25" text-anchor="middle" font-size="16">)"
      << xml_escape(title) << "</text>\n";

  // Axes and y ticks.
  const double x0 = left, y0 = top + plot_h;
  svg << R"(<line class="axis" x1=")" << num(x0) << R"(" y1=")" << num(top) << R"(" x2=")" << num(x0) << R"(" y2=")"
      << num(y0) << R"(" stroke="black"/>)" << '\n';
  svg << R"(<line class="axis" x1=")" << num(x0) << R"(" y1=")" << num(y0) << R"(" x2=")" << num(x0 + plot_w)
      << R"(" y2=")" << num(y0) << R"(" stroke="black"/>)" << '\n';
  const int ticks = options.log_scale ? static_cast<int>(axis_hi - axis_lo) : 5;
  for (int t = 0; t <= ticks; ++t) {
    const double frac = static_cast<double>(t) / ticks;
    const double y = y0 - frac * plot_h;
    const double value = options.log_scale ? std::pow(10.0, axis_lo + t) : axis_hi * frac;
    std::ostringstream label;
    label << std::setprecision(3) << value;
    svg << R"(<text class="tick" x=")" << num(x0 - 6) << R"(" y=")" << num(y + 4)
        << R"(" text-anchor="end" font-size="11">)" << label.str() << "</text>\n";
  }
  svg << R"(<text x="18" y=")" << num(top + plot_h / 2) << R"(" transform="rotate(-90 18 )" << num(top + plot_h / 2)
      << R"svg()" text-anchor="middle" font-size="12">)svg" << (options.log_scale ? "Time (s, log scale)" : "Time (s)")
      << "</text>\n";
  svg << R"(<text x=")" << num(x0 + plot_w / 2) << R"(" y=")" << num(options.height - 15.0)
      << R"(" text-anchor="middle" font-size="12">Power</text>)" << '\n';

  for (std::size_t g = 0; g < powers.size(); ++g) {
    const double gx = x0 + g * group_w;
    svg << R"(<text class="group" x=")" << num(gx + group_w / 2) << R"(" y=")" << num(y0 + 18)
        << R"(" text-anchor="middle" font-size="11">)" << powers[g] << "</text>\n";
  }
  for (const auto& r : records) {
    const std::string name = std::string(to_string(r.strategy)) + "/" + r.backend;
    const auto s = static_cast<std::size_t>(std::find(series.begin(), series.end(), name) - series.begin());
    const auto g = static_cast<std::size_t>(std::find(powers.begin(), powers.end(), r.power) - powers.begin());
    const double h = std::max(0.0, bar_height(r.seconds));
    const double x = x0 + g * group_w + group_w * 0.1 + s * bar_w;
    svg << R"(<rect class="bar" x=")" << num(x) << R"(" y=")" << num(y0 - h) << R"(" width=")" << num(bar_w)
        << R"(" height=")" << num(h) << R"(" fill=")" << kPalette[s % kPalette.size()] << R"(" data-series=")"
        << xml_escape(name) << R"(" data-power=")" << r.power << R"(" data-value=")" << num(r.seconds) << R"("/>)"
        << '\n';
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    const double ly = top + 10.0 + s * 20.0;
    const double lx = x0 + plot_w + 15.0;
    svg << R"(<rect class="legend" x=")" << num(lx) << R"(" y=")" << num(ly) << R"(" width="12" height="12" fill=")"
        << kPalette[s % kPalette.size()] << R"("/>)" << '\n';
    svg << R"(<text x=")" << num(lx + 18) << R"(" y=")" << num(ly + 10) << R"(" font-size="11">)"
        << xml_escape(series[s]) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_plot(const std::vector<BenchmarkRecord>& records, const std::filesystem::path& path,
               const PlotOptions& options) {
  const std::string doc = render_plot(records, options);
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "' for writing");
  out << doc;
  if (!out) throw Error(ErrorKind::kIo, "write to '" + path.string() + "' failed");
}

}  // namespace matexpo::report
