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
#include <stdexcept>
#include <string>
#include <string_view>

namespace matexpo {

enum class ErrorKind {
  kInvalidDimension,
  kInvalidRange,
  kShape,
  kTiling,
  kLocalMemory,
  kUnsupported,
  kStep,
  kTable,
  kIo,
  kParse,
  kConfig,
};

std::string_view to_string(ErrorKind kind);

// Base for every error raised by the library. The kind is stable and is what
// callers (and the CLI exit-code mapping) should switch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class LocalMemoryError : public Error {
 public:
  LocalMemoryError(std::size_t footprint_bytes, std::size_t budget_bytes);

  std::size_t footprint_bytes() const noexcept { return footprint_; }
  std::size_t budget_bytes() const noexcept { return budget_; }

 private:
  std::size_t footprint_;
  std::size_t budget_;
};

// A backend multiply failed while executing an exponentiation plan.
class StepError : public Error {
 public:
  StepError(std::size_t step_index, const std::string& cause);

  std::size_t step_index() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace matexpo
