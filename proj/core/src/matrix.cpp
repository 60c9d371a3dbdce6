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

#include "matexpo/matrix.hpp"

#include <cmath>
#include <cstring>
#include <string>

namespace matexpo {

std::size_t dtype_size(DType dtype) noexcept { return dtype == DType::kF32 ? sizeof(float) : sizeof(double); }

std::string_view to_string(DType dtype) noexcept { return dtype == DType::kF32 ? "f32" : "f64"; }

DType parse_dtype(std::string_view text) {
  if (text == "f32") return DType::kF32;
  if (text == "f64") return DType::kF64;
  throw Error(ErrorKind::kParse, "unknown dtype '" + std::string(text) + "' (expected f32 or f64)");
}

namespace {

std::variant<std::vector<float>, std::vector<double>> zeros(std::size_t count, DType dtype) {
  if (dtype == DType::kF32) return std::vector<float>(count, 0.0f);
  return std::vector<double>(count, 0.0);
}

}  // namespace

Matrix::Matrix(std::size_t n, DType dtype) : n_(n), dtype_(dtype), data_(zeros(n * n, dtype)) {
  if (n == 0) throw Error(ErrorKind::kInvalidDimension, "matrix order must be at least 1");
}

Matrix::Matrix(std::size_t n, DType dtype, Storage data) : n_(n), dtype_(dtype), data_(std::move(data)) {}

Matrix Matrix::from_rows(DType dtype, std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t n = rows.size();
  Matrix m(n, dtype);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != n) throw Error(ErrorKind::kInvalidDimension, "rows must all have length " + std::to_string(n));
    std::size_t j = 0;
    for (double v : row) m.set(i, j++, v);
    ++i;
  }
  return m;
}

double Matrix::get(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) throw Error(ErrorKind::kShape, "index out of range");
  return visit([&](auto v) { return static_cast<double>(v[i * n_ + j]); });
}

void Matrix::set(std::size_t i, std::size_t j, double value) {
  if (i >= n_ || j >= n_) throw Error(ErrorKind::kShape, "index out of range");
  visit([&](auto v) {
    using T = typename decltype(v)::value_type;
    v[i * n_ + j] = static_cast<T>(value);
  });
}

Matrix Matrix::as(DType dtype) const {
  if (dtype == dtype_) return *this;
  Matrix out(n_, dtype);
  visit([&](auto src) {
    out.visit([&](auto dst) {
      using T = typename decltype(dst)::value_type;
      for (std::size_t k = 0; k < src.size(); ++k) dst[k] = static_cast<T>(src[k]);
    });
  });
  return out;
}

bool Matrix::bitwise_equal(const Matrix& other) const noexcept {
  if (n_ != other.n_ || dtype_ != other.dtype_) return false;
  return visit([&](auto mine) {
    using T = typename decltype(mine)::value_type;
    const auto& theirs = std::get<std::vector<T>>(other.data_);
    return std::memcmp(mine.data(), theirs.data(), mine.size_bytes()) == 0;
  });
}

bool Matrix::all_finite() const noexcept {
  return visit([](auto v) {
    for (auto x : v) {
      if (!std::isfinite(x)) return false;
    }
    return true;
  });
}

}  // namespace matexpo
