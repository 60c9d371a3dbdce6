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
#include <initializer_list>
#include <span>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "matexpo/error.hpp"

namespace matexpo {

enum class DType { kF32, kF64 };

std::size_t dtype_size(DType dtype) noexcept;
std::string_view to_string(DType dtype) noexcept;
DType parse_dtype(std::string_view text);  // "f32" | "f64"

template <class T>
inline constexpr bool is_element_v = std::is_same_v<T, float> || std::is_same_v<T, double>;

template <class T>
  requires is_element_v<T>
constexpr DType dtype_of() {
  return std::is_same_v<T, float> ? DType::kF32 : DType::kF64;
}

// Dense n x n matrix, row-major: element (i, j) lives at data[i * n + j].
// The element type is chosen at runtime; arithmetic kernels dispatch once per
// call through visit().
class Matrix {
 public:
  Matrix(std::size_t n, DType dtype);  // zero-filled

  template <class T>
    requires is_element_v<T>
  static Matrix from_values(std::size_t n, std::vector<T> values);

  static Matrix from_rows(DType dtype, std::initializer_list<std::initializer_list<double>> rows);

  std::size_t n() const noexcept { return n_; }
  DType dtype() const noexcept { return dtype_; }
  std::size_t size() const noexcept { return n_ * n_; }

  double get(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, double value);

  template <class T>
  std::span<T> values();
  template <class T>
  std::span<const T> values() const;

  // Calls f(std::span<const T>) with the typed storage.
  template <class F>
  decltype(auto) visit(F&& f) const {
    return std::visit([&](const auto& v) -> decltype(auto) {
      using T = typename std::decay_t<decltype(v)>::value_type;
      return f(std::span<const T>(v));
    }, data_);
  }
  template <class F>
  decltype(auto) visit(F&& f) {
    return std::visit([&](auto& v) -> decltype(auto) {
      using T = typename std::decay_t<decltype(v)>::value_type;
      return f(std::span<T>(v));
    }, data_);
  }

  Matrix as(DType dtype) const;

  // Same n, same dtype and identical object representation of every element.
  bool bitwise_equal(const Matrix& other) const noexcept;
  bool all_finite() const noexcept;

 private:
  using Storage = std::variant<std::vector<float>, std::vector<double>>;
  Matrix(std::size_t n, DType dtype, Storage data);

  std::size_t n_;
  DType dtype_;
  Storage data_;
};

template <class T>
  requires is_element_v<T>
Matrix Matrix::from_values(std::size_t n, std::vector<T> values) {
  if (n == 0) throw Error(ErrorKind::kInvalidDimension, "matrix order must be at least 1");
  if (values.size() != n * n) {
    throw Error(ErrorKind::kInvalidDimension, "expected " + std::to_string(n * n) + " values, got " +
                                                  std::to_string(values.size()));
  }
  return Matrix(n, dtype_of<T>(), Storage(std::move(values)));
}

template <class T>
std::span<T> Matrix::values() {
  auto* v = std::get_if<std::vector<T>>(&data_);
  if (v == nullptr) throw Error(ErrorKind::kShape, "element type mismatch on typed access");
  return *v;
}

template <class T>
std::span<const T> Matrix::values() const {
  const auto* v = std::get_if<std::vector<T>>(&data_);
  if (v == nullptr) throw Error(ErrorKind::kShape, "element type mismatch on typed access");
  return *v;
}

}  // namespace matexpo
