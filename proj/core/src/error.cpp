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

#include "matexpo/error.hpp"

namespace matexpo {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidDimension: return "invalid-dimension";
    case ErrorKind::kInvalidRange: return "invalid-range";
    case ErrorKind::kShape: return "shape";
    case ErrorKind::kTiling: return "tiling";
    case ErrorKind::kLocalMemory: return "local-memory";
    case ErrorKind::kUnsupported: return "unsupported";
    case ErrorKind::kStep: return "step";
    case ErrorKind::kTable: return "table";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kConfig: return "config";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}

LocalMemoryError::LocalMemoryError(std::size_t footprint_bytes, std::size_t budget_bytes)
    : Error(ErrorKind::kLocalMemory,
            "tile footprint " + std::to_string(footprint_bytes) + " bytes exceeds local memory budget " +
                std::to_string(budget_bytes) + " bytes"),
      footprint_(footprint_bytes),
      budget_(budget_bytes) {}

StepError::StepError(std::size_t step_index, const std::string& cause)
    : Error(ErrorKind::kStep, "plan step " + std::to_string(step_index) + " failed: " + cause),
      step_(step_index) {}

}  // namespace matexpo
