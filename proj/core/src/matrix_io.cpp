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

#include "matexpo/matrix_io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace matexpo {

namespace {

template <class T>
std::string to_shortest(T value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw Error(ErrorKind::kIo, "could not format value");
  return std::string(buf.data(), ptr);
}

template <class T>
T parse_value(const std::string& token) {
  T value{};
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) throw Error(ErrorKind::kParse, "bad matrix value '" + token + "'");
  return value;
}

}  // namespace

std::string shortest_repr(double value) { return to_shortest(value); }
std::string shortest_repr(float value) { return to_shortest(value); }

void write_matrix(std::ostream& out, const Matrix& m) {
  const std::size_t n = m.n();
  out << n << ' ' << to_string(m.dtype()) << '\n';
  m.visit([&](auto v) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (j != 0) out << ' ';
        out << to_shortest(v[i * n + j]);
      }
      out << '\n';
    }
  });
}

Matrix read_matrix(std::istream& in) {
  std::size_t n = 0;
  std::string dtype_text;
  if (!(in >> n >> dtype_text)) throw Error(ErrorKind::kParse, "missing matrix header '<n> <dtype>'");
  if (n == 0) throw Error(ErrorKind::kInvalidDimension, "matrix order must be at least 1");
  Matrix m(n, parse_dtype(dtype_text));
  m.visit([&](auto v) {
    using T = typename decltype(v)::value_type;
    std::string token;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (!(in >> token)) {
        throw Error(ErrorKind::kParse, "expected " + std::to_string(v.size()) + " values, got " + std::to_string(k));
      }
      v[k] = parse_value<T>(token);
    }
  });
  std::string extra;
  if (in >> extra) throw Error(ErrorKind::kParse, "trailing data after matrix: '" + extra + "'");
  return m;
}

std::string format_matrix(const Matrix& m) {
  std::ostringstream out;
  write_matrix(out, m);
  return out.str();
}

Matrix parse_matrix(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_matrix(in);
}

void save_matrix(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "' for writing");
  write_matrix(out, m);
  if (!out) throw Error(ErrorKind::kIo, "write to '" + path.string() + "' failed");
}

Matrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  return read_matrix(in);
}

}  // namespace matexpo
