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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "matexpo/matrix.hpp"

namespace matexpo {

// Text format:
//   line 1:  "<n> <f32|f64>"
//   then n lines of n whitespace-separated decimal values, row-major.
// Values are written in shortest round-trip form, so read(write(A)) == A.
void write_matrix(std::ostream& out, const Matrix& m);
Matrix read_matrix(std::istream& in);

std::string format_matrix(const Matrix& m);
Matrix parse_matrix(std::string_view text);

void save_matrix(const std::filesystem::path& path, const Matrix& m);
Matrix load_matrix(const std::filesystem::path& path);

// Shortest decimal string that parses back to the same value.
std::string shortest_repr(double value);
std::string shortest_repr(float value);

}  // namespace matexpo
