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
#ifndef BKLATTICE_NORMS_HPP
#define BKLATTICE_NORMS_HPP

// Weighted p -> p operator norms of fiber matrices,
//
//   ||A||_{p,w} = sup_x ||A x||_{p,w} / ||x||_{p,w},
//   ||x||_{p,w} = (sum_i w_i |x_i|^p)^(1/p),
//
// and the L0-valued norm of a fibered operator (one such norm per fiber,
// with the fiber's measure row as weights).
//
// Every path reduces to the unweighted problem through the diagonal
// similarity B = D^(1/p) A D^(-1/p), D = diag(w), which is an exact change of
// variables y = D^(1/p) x.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bklattice/core_lattice.hpp"
#include "bklattice/matrix.hpp"
#include "bklattice/operators.hpp"

namespace bklat {

enum class NormMethod { ExactP1, ExactP2, ExactPInf, Boyd, Oracle };

std::string to_string(NormMethod m);

struct NormResult {
  double value = 0.0;
  NormMethod method = NormMethod::Oracle;
  bool converged = true;
  int iterations = 0;
  /// Witness x in the original (weighted) coordinates; ratio(A, w, p, x)
  /// reproduces `value`.
  std::vector<double> certificate;
};

double weighted_pnorm(std::span<const double> x, std::span<const double> w, double p);

/// ||A x||_{p,w} / ||x||_{p,w}; 0 for x = 0.
double norm_ratio(const Matrix& a, std::span<const double> w, double p, std::span<const double> x);

/// D^(1/p) A D^(-1/p) (for p = inf the identity map on A).
Matrix weighted_similarity(const Matrix& a, std::span<const double> w, double p);

/// Closed forms: p = 1 weighted max column sum, p = inf max row sum, p = 2
/// largest singular value of D^(1/2) A D^(-1/2). Ties break toward the
/// smallest index. Throws InvalidP for any other p, NonPositiveWeight.
NormResult opnorm_exact(const Matrix& a, std::span<const double> w, double p);

/// Boyd's nonlinear power method for 1 < p < inf. The estimates form a
/// nondecreasing sequence of lower bounds; for nonnegative matrices started
/// from the positive vector the limit is the norm. Does not throw on slow
/// convergence: returns the best bound with converged = false.
NormResult opnorm_boyd(const Matrix& a, std::span<const double> w, double p, double tol = 1e-12,
                       int max_iter = 100000);

/// Certified lower bound: seeded random directions, +-basis vectors and the
/// all-ones vector, then coordinate-ascent polish from the best one.
NormResult opnorm_oracle(const Matrix& a, std::span<const double> w, double p, std::size_t samples,
                         std::uint64_t seed);

/// Weighted Riesz-Thorin bound ||A||_1^(1/p) ||A||_inf^(1-1/p) (an upper bound).
double interpolation_bound(const Matrix& a, std::span<const double> w, double p);

struct NormOptions {
  double tol = 1e-12;
  int max_iter = 100000;
  std::size_t oracle_samples = 2000;
  std::uint64_t oracle_seed = 0x5eedULL;
};

/// Per-fiber norms: exact for p in {1, 2, inf}, Boyd for nonnegative fibers
/// otherwise, oracle for signed fibers. Throws NoConvergence if Boyd stalls.
std::vector<NormResult> l0_opnorm_detailed(const FiberedOperator& t, const VectorMeasure& m, double p,
                                           const NormOptions& opts = {});

L0Scalar l0_opnorm(const FiberedOperator& t, const VectorMeasure& m, double p, const NormOptions& opts = {});

/// ||T|| <= 1 (+ slack) at every base atom.
bool is_contraction(const FiberedOperator& t, const VectorMeasure& m, double p, double slack = 1e-10);

}  // namespace bklat

#endif  // BKLATTICE_NORMS_HPP
