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
#ifndef BKLATTICE_ZEROTWO_HPP
#define BKLATTICE_ZEROTWO_HPP

// Driver for the zero-two dichotomy of a positive sub-unital contraction T:
//
//   d_n = || |T^(n+1) - T^n| ||   (an L0 element, one value per base atom)
//
// either stays at 2 or, once some d_m < 2 at every atom, tends to 0 at every
// atom. Over a finite atomic base, order convergence in L0 is convergence at
// each atom, so every verdict here is per fiber.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bklattice/core_lattice.hpp"
#include "bklattice/norms.hpp"
#include "bklattice/operators.hpp"

namespace bklat {

inline constexpr double kDefaultZeroTol = 1e-8;
inline constexpr double kDefaultTwoTol = 1e-9;

struct DichotomyOptions {
  double two_tol = kDefaultTwoTol;
  double contraction_slack = 1e-10;
  /// Every `recheck_every`-th step the entrywise modulus is compared against
  /// the partition-net modulus; 0 disables the recheck.
  unsigned recheck_every = 10;
  NormOptions norm;
};

struct DichotomyTrace {
  double p = 1.0;
  unsigned n_max = 0;
  /// d[n][k] for n = 0..n_max.
  std::vector<std::vector<double>> d;
  /// First m with d[m][k] < 2 - two_tol at every k.
  std::optional<unsigned> hypothesis_m;
  double two_tol = kDefaultTwoTol;
  /// Entries of T^n with magnitude below 1e-300 that were flushed to zero.
  std::size_t flushed_entries = 0;
  std::size_t net_rechecks = 0;

  std::size_t fibers() const noexcept { return d.empty() ? 0 : d.front().size(); }
};

/// Throws NotPositive, NotSubUnital or NotContraction(p) when T fails the
/// standing hypotheses, CheckFailed if the modulus recheck disagrees.
DichotomyTrace run_dichotomy(const FiberedOperator& t, const VectorMeasure& m, double p, unsigned n_max,
                             const DichotomyOptions& opts = {});

/// Same checks run_dichotomy performs before tracing.
void require_dichotomy_preconditions(const FiberedOperator& t, const VectorMeasure& m, double p,
                                     double slack = 1e-10, const NormOptions& norm = {});

/// Per fiber: d[m][k] < 2 - two_tol. Throws IndexOutOfRange if m > n_max.
std::vector<bool> check_hypothesis(const DichotomyTrace& trace, unsigned m, double two_tol = kDefaultTwoTol);

enum class Verdict { ConvergesToZero, StuckAtTwo, Undecided };

std::string to_string(Verdict v);

struct FiberVerdict {
  std::size_t fiber = 0;
  Verdict verdict = Verdict::Undecided;
  std::optional<unsigned> first_below_2;
  double final_value = 0.0;
};

std::vector<FiberVerdict> classify(const DichotomyTrace& trace, double zero_tol = kDefaultZeroTol,
                                   double two_tol = kDefaultTwoTol);

struct FiberGlobalReport {
  /// Fiber norms of the globally assembled modulus of T - S.
  std::vector<double> global_path;
  /// Norms of the entrywise fiber moduli |A_T^(k) - A_S^(k)|.
  std::vector<double> fiber_path;
  double max_rel_discrepancy = 0.0;
  /// global_path[k] <= fiber_path[k] + 1e-12 at every k.
  bool fiber_dominates = true;
};

FiberGlobalReport compare_fiber_global(const FiberedOperator& t, const FiberedOperator& s, const VectorMeasure& m,
                                       double p, const NormOptions& norm = {});

}  // namespace bklat

#endif  // BKLATTICE_ZEROTWO_HPP
