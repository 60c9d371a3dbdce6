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

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>

#include "matexpo/matrix.hpp"

namespace matexpo {

// Tile shapes the tiled kernels are designed and tested for.
inline constexpr std::array<std::pair<std::size_t, std::size_t>, 6> kTileMenu = {{
    {4, 4}, {4, 8}, {8, 8}, {16, 8}, {8, 16}, {16, 16},
}};

inline constexpr std::size_t kDefaultLocalMemBytes = 16 * 1024;

// Blocking parameters for the tiled multiply and the kernel simulator.
//
// A work-group computes one tile_rows x tile_cols block of the output, one
// work-item per element. The reduction dimension advances in phases of
// phase_depth() = min(tile_rows, tile_cols) so that every work-item stages at
// most one element of each operand tile per phase; the two local buffers are
// provisioned at tile_rows * tile_cols elements each.
struct TileConfig {
  std::size_t tile_rows = 16;
  std::size_t tile_cols = 16;
  unsigned vector_width = 1;   // 1 or 4 accumulator lanes
  unsigned unroll_factor = 1;  // 1, 4, 8 or 16
  std::size_t local_mem_budget_bytes = kDefaultLocalMemBytes;
  // Allows tile shapes outside kTileMenu (small fixtures such as 1x1 or 2x2).
  bool experimental = false;

  std::size_t phase_depth() const noexcept { return tile_rows < tile_cols ? tile_rows : tile_cols; }
  std::size_t group_size() const noexcept { return tile_rows * tile_cols; }

  // "16x16", "16x16/vw4/u8"
  std::string label() const;

  friend bool operator==(const TileConfig&, const TileConfig&) = default;
};

bool is_menu_tile(std::size_t rows, std::size_t cols) noexcept;

// Parses "RxC" into rows/cols of `base`.
TileConfig parse_tile(std::string_view text, TileConfig base = {});

// Structural checks: menu membership, vector width, unroll factor.
void validate(const TileConfig& cfg);

// 2 * tile_rows * tile_cols * sizeof(dtype); no budget check.
std::size_t local_footprint_bytes(const TileConfig& cfg, DType dtype) noexcept;

// Returns the footprint, or throws LocalMemoryError when it exceeds the budget.
std::size_t check_budget(const TileConfig& cfg, DType dtype);

// Throws a tiling error unless n is divisible by both tile dimensions.
void check_tiling(std::size_t n, const TileConfig& cfg);

}  // namespace matexpo
