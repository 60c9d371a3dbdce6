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

#include "matexpo/linalg.hpp"

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "matexpo/random.hpp"

namespace matexpo {

void check_same_shape(const Matrix& a, const Matrix& b) {
  if (a.n() != b.n()) {
    throw Error(ErrorKind::kShape, "order mismatch: " + std::to_string(a.n()) + " vs " + std::to_string(b.n()));
  }
  if (a.dtype() != b.dtype()) {
    throw Error(ErrorKind::kShape, std::string("dtype mismatch: ") + std::string(to_string(a.dtype())) + " vs " +
                                       std::string(to_string(b.dtype())));
  }
}

Matrix identity(std::size_t n, DType dtype) {
  if (n == 0) throw Error(ErrorKind::kInvalidDimension, "identity order must be at least 1");
  Matrix m(n, dtype);
  m.visit([n](auto v) {
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1;
  });
  return m;
}

Matrix random_matrix(std::size_t n, DType dtype, std::uint64_t seed, double lo, double hi) {
  if (!(lo < hi)) {
    throw Error(ErrorKind::kInvalidRange, "need lo < hi, got [" + std::to_string(lo) + ", " + std::to_string(hi) + ")");
  }
  if (n == 0) throw Error(ErrorKind::kInvalidDimension, "matrix order must be at least 1");
  SplitMix64 rng(seed);
  Matrix m(n, dtype);
  m.visit([&](auto v) {
    using T = typename decltype(v)::value_type;
    for (auto& x : v) {
      double d = lo + (hi - lo) * rng.next_unit();
      if (d >= hi) d = std::nextafter(hi, lo);
      T t = static_cast<T>(d);
      if (static_cast<double>(t) >= hi) t = std::nextafter(t, -std::numeric_limits<T>::infinity());
      if (static_cast<double>(t) < lo) t = std::nextafter(t, std::numeric_limits<T>::infinity());
      if (static_cast<double>(t) < lo || static_cast<double>(t) >= hi) {
        throw Error(ErrorKind::kInvalidRange, "range is narrower than the element type resolution");
      }
      x = t;
    }
  });
  return m;
}

Matrix matmul_naive(const Matrix& a, const Matrix& b) {
  check_same_shape(a, b);
  const std::size_t n = a.n();
  Matrix c(n, a.dtype());
  c.visit([&](auto out) {
    using T = typename decltype(out)::value_type;
    auto x = a.values<T>();
    auto y = b.values<T>();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        T sum = 0;
        for (std::size_t k = 0; k < n; ++k) sum += x[i * n + k] * y[k * n + j];
        out[i * n + j] = sum;
      }
    }
  });
  return c;
}

namespace {

template <class T>
struct TileScratch {
  std::vector<T> a_tile;
  std::vector<T> b_tile;
  std::vector<T> acc;
};

// One output tile, scalar accumulators. The k loop is unrolled by kUnroll;
// summation order per element is unchanged.
template <class T, unsigned kUnroll>
void accumulate_scalar(const TileScratch<T>& s, std::vector<T>& acc, std::size_t rows, std::size_t cols,
                       std::size_t depth) {
  for (std::size_t r = 0; r < rows; ++r) {
    const T* arow = s.a_tile.data() + r * depth;
    for (std::size_t c = 0; c < cols; ++c) {
      T sum = acc[r * cols + c];
      std::size_t k = 0;
      for (; k + kUnroll <= depth; k += kUnroll) {
        for (unsigned u = 0; u < kUnroll; ++u) sum += arow[k + u] * s.b_tile[(k + u) * cols + c];
      }
      for (; k < depth; ++k) sum += arow[k] * s.b_tile[k * cols + c];
      acc[r * cols + c] = sum;
    }
  }
}

// Four accumulator lanes per element; k goes to lane k % 4 (depth % 4 == 0).
template <class T, unsigned kUnroll>
void accumulate_vec4(const TileScratch<T>& s, std::vector<T>& acc, std::size_t rows, std::size_t cols,
                     std::size_t depth) {
  static_assert(kUnroll % 4 == 0);
  for (std::size_t r = 0; r < rows; ++r) {
    const T* arow = s.a_tile.data() + r * depth;
    for (std::size_t c = 0; c < cols; ++c) {
      T* lanes = acc.data() + (r * cols + c) * 4;
      std::size_t k = 0;
      for (; k + kUnroll <= depth; k += kUnroll) {
        for (unsigned u = 0; u < kUnroll; ++u) lanes[u % 4] += arow[k + u] * s.b_tile[(k + u) * cols + c];
      }
      for (; k < depth; ++k) lanes[k % 4] += arow[k] * s.b_tile[k * cols + c];
    }
  }
}

template <class T>
void tiled_kernel(std::span<const T> a, std::span<const T> b, std::span<T> out, std::size_t n,
                  const TileConfig& cfg) {
  const std::size_t rows = cfg.tile_rows;
  const std::size_t cols = cfg.tile_cols;
  const std::size_t depth = cfg.phase_depth();
  const std::size_t lanes = cfg.vector_width;
  TileScratch<T> s{std::vector<T>(rows * depth), std::vector<T>(depth * cols), {}};
  std::vector<T> acc(rows * cols * lanes);

  for (std::size_t bi = 0; bi < n / rows; ++bi) {
    for (std::size_t bj = 0; bj < n / cols; ++bj) {
      std::fill(acc.begin(), acc.end(), T{0});
      for (std::size_t p = 0; p < n / depth; ++p) {
        for (std::size_t r = 0; r < rows; ++r) {
          for (std::size_t c = 0; c < depth; ++c) s.a_tile[r * depth + c] = a[(bi * rows + r) * n + p * depth + c];
        }
        for (std::size_t r = 0; r < depth; ++r) {
          for (std::size_t c = 0; c < cols; ++c) s.b_tile[r * cols + c] = b[(p * depth + r) * n + bj * cols + c];
        }
        if (lanes == 1) {
          switch (cfg.unroll_factor) {
            case 4: accumulate_scalar<T, 4>(s, acc, rows, cols, depth); break;
            case 8: accumulate_scalar<T, 8>(s, acc, rows, cols, depth); break;
            case 16: accumulate_scalar<T, 16>(s, acc, rows, cols, depth); break;
            default: accumulate_scalar<T, 1>(s, acc, rows, cols, depth); break;
          }
        } else {
          switch (cfg.unroll_factor) {
            case 8: accumulate_vec4<T, 8>(s, acc, rows, cols, depth); break;
            case 16: accumulate_vec4<T, 16>(s, acc, rows, cols, depth); break;
            default: accumulate_vec4<T, 4>(s, acc, rows, cols, depth); break;
          }
        }
      }
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
          const std::size_t e = r * cols + c;
          out[(bi * rows + r) * n + bj * cols + c] = lanes == 1 ? acc[e] : reduce_lanes(acc.data() + e * 4);
        }
      }
    }
  }
}

}  // namespace

Matrix matmul_tiled(const Matrix& a, const Matrix& b, const TileConfig& cfg) {
  check_same_shape(a, b);
  validate(cfg);
  check_tiling(a.n(), cfg);
  check_budget(cfg, a.dtype());
  Matrix c(a.n(), a.dtype());
  c.visit([&](auto out) {
    using T = typename decltype(out)::value_type;
    tiled_kernel<T>(a.values<T>(), b.values<T>(), out, a.n(), cfg);
  });
  return c;
}

ErrorMetrics compare(const Matrix& result, const Matrix& reference) {
  check_same_shape(result, reference);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  double max_abs = 0.0;
  double ref_max = 0.0;
  double diff_sq = 0.0;
  double ref_sq = 0.0;
  result.visit([&](auto r) {
    using T = typename decltype(r)::value_type;
    auto ref = reference.values<T>();
    for (std::size_t k = 0; k < r.size(); ++k) {
      const double x = static_cast<double>(r[k]);
      const double y = static_cast<double>(ref[k]);
      double d = std::fabs(x - y);
      if (std::isnan(d)) d = (x == y) ? 0.0 : kInf;  // NaN in either operand counts as unbounded error
      max_abs = std::max(max_abs, d);
      ref_max = std::max(ref_max, std::fabs(y));
      diff_sq += d * d;
      ref_sq += y * y;
    }
  });
  ErrorMetrics m;
  m.max_abs = max_abs;
  if (ref_max == 0.0) {
    m.max_rel = max_abs == 0.0 ? 0.0 : kInf;
    m.frobenius_rel = max_abs == 0.0 ? 0.0 : kInf;
  } else {
    m.max_rel = max_abs / ref_max;
    m.frobenius_rel = std::sqrt(diff_sq) / std::sqrt(ref_sq);
  }
  return m;
}

}  // namespace matexpo
