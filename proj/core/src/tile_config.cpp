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

#include "matexpo/tile_config.hpp"

#include <charconv>

namespace matexpo {

std::string TileConfig::label() const {
  std::string s = std::to_string(tile_rows) + "x" + std::to_string(tile_cols);
  if (vector_width != 1) s += "/vw" + std::to_string(vector_width);
  if (unroll_factor != 1) s += "/u" + std::to_string(unroll_factor);
  return s;
}

bool is_menu_tile(std::size_t rows, std::size_t cols) noexcept {
  for (auto [r, c] : kTileMenu) {
    if (r == rows && c == cols) return true;
  }
  return false;
}

TileConfig parse_tile(std::string_view text, TileConfig base) {
  const auto x = text.find('x');
  if (x == std::string_view::npos) throw Error(ErrorKind::kParse, "tile must look like RxC, got '" + std::string(text) + "'");
  auto parse_dim = [&](std::string_view part) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size() || v == 0) {
      throw Error(ErrorKind::kParse, "bad tile dimension '" + std::string(part) + "'");
    }
    return v;
  };
  base.tile_rows = parse_dim(text.substr(0, x));
  base.tile_cols = parse_dim(text.substr(x + 1));
  return base;
}

void validate(const TileConfig& cfg) {
  if (cfg.tile_rows == 0 || cfg.tile_cols == 0) throw Error(ErrorKind::kTiling, "tile dimensions must be positive");
  if (!cfg.experimental && !is_menu_tile(cfg.tile_rows, cfg.tile_cols)) {
    throw Error(ErrorKind::kTiling, "tile " + std::to_string(cfg.tile_rows) + "x" + std::to_string(cfg.tile_cols) +
                                        " is not in the tile menu (mark it experimental to allow)");
  }
  if (cfg.vector_width != 1 && cfg.vector_width != 4) {
    throw Error(ErrorKind::kTiling, "vector width must be 1 or 4, got " + std::to_string(cfg.vector_width));
  }
  if (cfg.vector_width == 4 && cfg.phase_depth() % 4 != 0) {
    throw Error(ErrorKind::kTiling, "vector width 4 needs a phase depth divisible by 4");
  }
  switch (cfg.unroll_factor) {
    case 1: case 4: case 8: case 16: break;
    default: throw Error(ErrorKind::kTiling, "unroll factor must be one of 1, 4, 8, 16");
  }
  if (cfg.local_mem_budget_bytes == 0) throw Error(ErrorKind::kTiling, "local memory budget must be positive");
}

std::size_t local_footprint_bytes(const TileConfig& cfg, DType dtype) noexcept {
  return 2 * cfg.tile_rows * cfg.tile_cols * dtype_size(dtype);
}

std::size_t check_budget(const TileConfig& cfg, DType dtype) {
  const std::size_t footprint = local_footprint_bytes(cfg, dtype);
  if (footprint > cfg.local_mem_budget_bytes) throw LocalMemoryError(footprint, cfg.local_mem_budget_bytes);
  return footprint;
}

void check_tiling(std::size_t n, const TileConfig& cfg) {
  if (cfg.tile_rows == 0 || cfg.tile_cols == 0 || n % cfg.tile_rows != 0 || n % cfg.tile_cols != 0) {
    throw Error(ErrorKind::kTiling, "matrix order " + std::to_string(n) + " is not divisible by tile " +
                                        std::to_string(cfg.tile_rows) + "x" + std::to_string(cfg.tile_cols));
  }
}

}  // namespace matexpo
