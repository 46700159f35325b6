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
#ifndef BKLATTICE_VERIFY_HPP
#define BKLATTICE_VERIFY_HPP

// Executable invariant suites. Each check draws its instances from seeded
// streams, so a (suite, seed) pair always runs the same cases.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bklattice/operators.hpp"

namespace bklat::verify {

struct CheckResult {
  std::string suite;
  std::string name;
  /// The property under test, in symbols.
  std::string statement;
  bool passed = true;
  std::string detail;
  /// First failing instance; null when the check passed.
  nlohmann::json counterexample;
};

struct Options {
  std::uint64_t seed = 1;
  /// Entrywise modulus used by the checks. Swappable so that mutation tests
  /// can confirm the suites notice a broken implementation.
  std::function<FiberedOperator(const FiberedOperator&)> modulus = modulus_direct;
};

/// "core", "operators", "norms", "zerotwo", "io".
const std::vector<std::string>& suite_names();

/// Runs one suite, or every suite for "all". Throws InvalidArgument for an
/// unknown name.
std::vector<CheckResult> run(const std::string& suite, const Options& opts = {});

}  // namespace bklat::verify

#endif  // BKLATTICE_VERIFY_HPP
