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
#ifndef BKLATTICE_PARALLEL_HPP
#define BKLATTICE_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace bklat {

/// Worker count: BK_THREADS if set and positive, otherwise the hardware
/// concurrency (BK_THREADS=0 means auto).
std::size_t thread_count();

/// Runs fn(i) for i in [0, count). Each index is handled exactly once and
/// callers write results by index, so output does not depend on scheduling.
/// The first exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace bklat

#endif  // BKLATTICE_PARALLEL_HPP
