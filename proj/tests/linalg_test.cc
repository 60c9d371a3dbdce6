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

#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "matexpo/linalg.hpp"
#include "matexpo/tolerance.hpp"
#include "oracles.hpp"

namespace matexpo {
namespace {

TileConfig tile(std::size_t r, std::size_t c, unsigned vw = 1, unsigned unroll = 1) {
  TileConfig cfg;
  cfg.tile_rows = r;
  cfg.tile_cols = c;
  cfg.vector_width = vw;
  cfg.unroll_factor = unroll;
  return cfg;
}

TEST(MatmulNaiveTest, FibonacciSquare) {
  const Matrix q = Matrix::from_rows(DType::kF64, {{1, 1}, {1, 0}});
  EXPECT_TRUE(matmul_naive(q, q).bitwise_equal(Matrix::from_rows(DType::kF64, {{2, 1}, {1, 1}})));
}

TEST(MatmulNaiveTest, IdentityIsTwoSidedUnit) {
  for (DType dtype : {DType::kF32, DType::kF64}) {
    const Matrix a = random_matrix(8, dtype, 42);
    const Matrix id = identity(8, dtype);
    EXPECT_TRUE(matmul_naive(a, id).bitwise_equal(a));
    EXPECT_TRUE(matmul_naive(id, a).bitwise_equal(a));
  }
}

TEST(MatmulNaiveTest, ZeroAnnihilates) {
  const Matrix a = random_matrix(6, DType::kF64, 3);
  const Matrix z(6, DType::kF64);
  EXPECT_TRUE(matmul_naive(z, a).bitwise_equal(z));
  EXPECT_TRUE(matmul_naive(a, z).bitwise_equal(z));
}

TEST(MatmulNaiveTest, ShapeErrors) {
  try {
    matmul_naive(Matrix(2, DType::kF64), Matrix(3, DType::kF64));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kShape);
  }
  EXPECT_THROW(matmul_naive(Matrix(2, DType::kF64), Matrix(2, DType::kF32)), Error);
}

TEST(MatmulNaiveTest, CloseToWideOracle) {
  const std::size_t n = 32;
  const Matrix a = random_matrix(n, DType::kF64, 5);
  const Matrix b = random_matrix(n, DType::kF64, 6);
  std::vector<long double> wa(a.values<double>().begin(), a.values<double>().end());
  std::vector<long double> wb(b.values<double>().begin(), b.values<double>().end());
  const auto wc = testing::wide_product(wa, wb, n);
  const Matrix c = matmul_naive(a, b);
  for (std::size_t k = 0; k < n * n; ++k) {
    EXPECT_NEAR(c.values<double>()[k], static_cast<double>(wc[k]), 1e-14);
  }
}

TEST(MatmulTiledTest, BitwiseEqualToNaiveAcrossMenu) {
  for (std::size_t n : {4u, 8u, 16u, 64u}) {
    for (DType dtype : {DType::kF32, DType::kF64}) {
      const Matrix a = random_matrix(n, dtype, 42);
      const Matrix b = random_matrix(n, dtype, 43);
      const Matrix ref = matmul_naive(a, b);
      for (auto [r, c] : kTileMenu) {
        if (n % r != 0 || n % c != 0) continue;
        for (unsigned unroll : {1u, 4u, 8u, 16u}) {
          EXPECT_TRUE(matmul_tiled(a, b, tile(r, c, 1, unroll)).bitwise_equal(ref))
              << "n=" << n << " tile=" << r << "x" << c << " unroll=" << unroll;
        }
      }
    }
  }
}

TEST(MatmulTiledTest, Seed42N64Tile16) {
  const Matrix a = random_matrix(64, DType::kF32, 42);
  const Matrix b = random_matrix(64, DType::kF32, 42);
  EXPECT_TRUE(matmul_tiled(a, b, tile(16, 16)).bitwise_equal(matmul_naive(a, b)));
}

TEST(MatmulTiledTest, VectorWidth4WithinTolerance) {
  const Matrix a = random_matrix(64, DType::kF32, 42);
  const Matrix b = random_matrix(64, DType::kF32, 43);
  const ErrorMetrics m = compare(matmul_tiled(a, b, tile(16, 16, 4)), matmul_naive(a, b));
  EXPECT_LE(m.max_rel, 1e-5);
  EXPECT_LE(m.max_rel, tolerance::vectorized_bound(64, DType::kF32));
}

// Property: the 4-lane reassociation stays inside n * u * 8 for every menu
// tile, unroll factor, dtype and a spread of seeds.
TEST(MatmulTiledTest, VectorizedToleranceProperty) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (std::size_t n : {16u, 32u, 64u}) {
      for (DType dtype : {DType::kF32, DType::kF64}) {
        const Matrix a = random_matrix(n, dtype, seed);
        const Matrix b = random_matrix(n, dtype, seed + 100);
        const Matrix ref = matmul_naive(a, b);
        for (auto [r, c] : kTileMenu) {
          for (unsigned unroll : {1u, 8u}) {
            const ErrorMetrics m = compare(matmul_tiled(a, b, tile(r, c, 4, unroll)), ref);
            EXPECT_LE(m.max_rel, tolerance::vectorized_bound(n, dtype)) << r << "x" << c;
          }
        }
      }
    }
  }
}

TEST(MatmulTiledTest, IdentityIsUnitForEveryVariant) {
  const Matrix a = random_matrix(16, DType::kF32, 11);
  const Matrix id = identity(16, DType::kF32);
  for (unsigned vw : {1u, 4u}) {
    const TileConfig cfg = tile(8, 16, vw);
    EXPECT_TRUE(matmul_tiled(a, id, cfg).bitwise_equal(a));
    EXPECT_TRUE(matmul_tiled(id, a, cfg).bitwise_equal(a));
  }
}

TEST(MatmulTiledTest, IndivisibleSizeRejected) {
  try {
    matmul_tiled(Matrix(10, DType::kF32), Matrix(10, DType::kF32), tile(4, 4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kTiling);
  }
}

TEST(MatmulTiledTest, BudgetExceededRejected) {
  TileConfig cfg = tile(16, 16);
  cfg.local_mem_budget_bytes = 1024;
  try {
    matmul_tiled(Matrix(16, DType::kF32), Matrix(16, DType::kF32), cfg);
    FAIL();
  } catch (const LocalMemoryError& e) {
    EXPECT_EQ(e.footprint_bytes(), 2048u);
    EXPECT_EQ(e.budget_bytes(), 1024u);
  }
}

TEST(MatmulTiledTest, OffMenuTileNeedsExperimentalFlag) {
  TileConfig cfg = tile(2, 2);
  EXPECT_THROW(matmul_tiled(Matrix(4, DType::kF64), Matrix(4, DType::kF64), cfg), Error);
  cfg.experimental = true;
  const Matrix a = random_matrix(4, DType::kF64, 1);
  EXPECT_TRUE(matmul_tiled(a, a, cfg).bitwise_equal(matmul_naive(a, a)));
}

TEST(TileConfigTest, Validation) {
  EXPECT_NO_THROW(validate(tile(16, 16, 4, 16)));
  EXPECT_THROW(validate(tile(16, 16, 2)), Error);
  EXPECT_THROW(validate(tile(16, 16, 1, 3)), Error);
  TileConfig odd = tile(2, 2, 4);
  odd.experimental = true;
  EXPECT_THROW(validate(odd), Error);  // phase depth 2 cannot feed 4 lanes
}

TEST(TileConfigTest, ParseAndLabel) {
  const TileConfig cfg = parse_tile("16x8");
  EXPECT_EQ(cfg.tile_rows, 16u);
  EXPECT_EQ(cfg.tile_cols, 8u);
  EXPECT_EQ(cfg.phase_depth(), 8u);
  EXPECT_EQ(tile(16, 16, 4, 8).label(), "16x16/vw4/u8");
  EXPECT_THROW(parse_tile("16"), Error);
  EXPECT_THROW(parse_tile("0x4"), Error);
  EXPECT_THROW(parse_tile("4xq"), Error);
}

TEST(CompareTest, SelfIsZero) {
  const Matrix a = random_matrix(5, DType::kF64, 2);
  const ErrorMetrics m = compare(a, a);
  EXPECT_EQ(m.max_abs, 0.0);
  EXPECT_EQ(m.max_rel, 0.0);
  EXPECT_EQ(m.frobenius_rel, 0.0);
}

TEST(CompareTest, HandArithmetic) {
  const ErrorMetrics m = compare(Matrix::from_rows(DType::kF64, {{1, 0}, {0, 1}}),
                                 Matrix::from_rows(DType::kF64, {{1, 0}, {0, 2}}));
  EXPECT_EQ(m.max_abs, 1.0);
  EXPECT_EQ(m.max_rel, 0.5);
  EXPECT_DOUBLE_EQ(m.frobenius_rel, 1.0 / std::sqrt(5.0));
}

TEST(CompareTest, ZeroReference) {
  const Matrix z(3, DType::kF32);
  EXPECT_EQ(compare(z, z).max_rel, 0.0);
  Matrix one = z;
  one.set(0, 0, 1.0);
  EXPECT_TRUE(std::isinf(compare(one, z).max_rel));
}

TEST(CompareTest, NonFiniteCountsAsUnbounded) {
  Matrix a = identity(2, DType::kF64);
  a.set(1, 0, std::numeric_limits<double>::quiet_NaN());
  EXPECT_TRUE(std::isinf(compare(a, identity(2, DType::kF64)).max_abs));
}

TEST(CompareTest, ShapeMismatch) {
  EXPECT_THROW(compare(Matrix(2, DType::kF64), Matrix(3, DType::kF64)), Error);
}

// Property: (AB)C vs A(BC) within n^2 * u * 8 for random inputs.
TEST(AssociativityTest, WithinBound) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    for (std::size_t n : {2u, 8u, 16u, 32u}) {
      for (DType dtype : {DType::kF32, DType::kF64}) {
        const Matrix a = random_matrix(n, dtype, seed * 3);
        const Matrix b = random_matrix(n, dtype, seed * 3 + 1);
        const Matrix c = random_matrix(n, dtype, seed * 3 + 2);
        const ErrorMetrics m = compare(matmul_naive(matmul_naive(a, b), c), matmul_naive(a, matmul_naive(b, c)));
        EXPECT_LE(m.max_rel, tolerance::associativity_bound(n, dtype));
      }
    }
  }
}

}  // namespace
}  // namespace matexpo
