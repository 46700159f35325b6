// Copyright 2026 The bklattice Authors
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
#ifndef BKLATTICE_ERROR_HPP
#define BKLATTICE_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bklat {

enum class Errc {
  ShapeMismatch,
  NonPositiveEntry,
  InvalidP,
  IndexOutOfRange,
  InvalidPartition,
  NegativeInput,
  NotPositive,
  NotSubUnital,
  NotContraction,
  NonPositiveWeight,
  InfeasibleScaling,
  NoConvergence,
  InvalidArgument,
  ParseError,
  IoError,
  CheckFailed,
};

const char* to_string(Errc code);

/// Every failure in the library is reported through this type. `row()` and
/// `col()` carry the offending position when one exists (NonPositiveEntry).
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, std::size_t row = npos, std::size_t col = npos)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        row_(row),
        col_(col) {}

  Errc code() const noexcept { return code_; }
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  Errc code_;
  std::size_t row_;
  std::size_t col_;
};

}  // namespace bklat

#endif  // BKLATTICE_ERROR_HPP
