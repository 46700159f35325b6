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
#ifndef BKLATTICE_OPERATORS_HPP
#define BKLATTICE_OPERATORS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bklattice/core_lattice.hpp"
#include "bklattice/matrix.hpp"

namespace bklat {

/// Slack used when checking T1 <= 1 on floating-point row sums.
inline constexpr double kSubUnitalSlack = 1e-12;

/// Flags as stored alongside an operator. They are claims, not facts: the
/// constructor re-derives each present flag and rejects a mismatch.
struct OperatorFlags {
  std::optional<bool> positive;
  std::optional<bool> sub_unital;
  std::vector<double> contraction_for_p;
};

/// L0-linear operator in bundle form: fiber k acts on row k of a Section.
class FiberedOperator {
 public:
  FiberedOperator() = default;
  explicit FiberedOperator(std::vector<Matrix> fibers, OperatorFlags flags = {});

  static FiberedOperator identity(std::size_t k, std::size_t n);
  static FiberedOperator zero(std::size_t k, std::size_t n);
  /// The same matrix on every fiber.
  static FiberedOperator constant(std::size_t k, const Matrix& a);

  std::size_t fibers() const noexcept { return fibers_.size(); }
  std::size_t dim() const noexcept { return fibers_.empty() ? 0 : fibers_.front().rows(); }
  const Matrix& fiber(std::size_t k) const { return fibers_.at(k); }
  const std::vector<Matrix>& matrices() const noexcept { return fibers_; }
  const OperatorFlags& flags() const noexcept { return flags_; }

  bool is_positive() const;
  /// Row sums of every fiber at most 1 + kSubUnitalSlack.
  bool is_sub_unital() const;

  /// Copy with positive/sub_unital flags set to their derived values.
  FiberedOperator with_derived_flags() const;

  friend bool operator==(const FiberedOperator& a, const FiberedOperator& b) { return a.fibers_ == b.fibers_; }

 private:
  std::vector<Matrix> fibers_;
  OperatorFlags flags_;
};

FiberedOperator operator-(const FiberedOperator& t, const FiberedOperator& s);
FiberedOperator operator+(const FiberedOperator& t, const FiberedOperator& s);
FiberedOperator operator*(double c, const FiberedOperator& t);

/// Row k of the result is A^(k) times row k of f.
Section apply(const FiberedOperator& t, const Section& f);

/// (t o s): fiberwise t * s.
FiberedOperator compose(const FiberedOperator& t, const FiberedOperator& s);

FiberedOperator power(const FiberedOperator& t, unsigned n);

/// sum over blocks B of |T(chi_B f)|, for f >= 0. Throws NegativeInput.
Section partition_step(const FiberedOperator& t, const PartitionOfUnity& pi, const Section& f);

struct ModulusReport {
  FiberedOperator modulus;
  /// net_values[s][q]: partition_step at chain step s on probe q. Probes are
  /// the N basis sections followed by the all-ones section.
  std::vector<std::vector<Section>> net_values;
  /// First chain index from which every probe value equals its final value.
  std::size_t steps_to_stabilize = 0;
};

/// Builds |T| by walking a refinement chain of partitions of unity and
/// reading off the atomic-partition values on the basis probes.
ModulusReport modulus_net(const FiberedOperator& t);

/// Entrywise |A^(k)| on every fiber. Independent of modulus_net.
FiberedOperator modulus_direct(const FiberedOperator& t);

struct MajorantViolation {
  Section probe;
  std::size_t fiber = 0;
  std::size_t index = 0;
  double lhs = 0.0;  // |A f| at (fiber, index)
  double rhs = 0.0;  // S|f| at (fiber, index)
};

/// Checks |A f| <= S |f| on the basis sections and on `trials` seeded random
/// sections. Returns the first violation, or nullopt. Throws NotPositive if S
/// has a negative entry, ShapeMismatch on dimension mismatch.
std::optional<MajorantViolation> majorant_check(const FiberedOperator& a, const FiberedOperator& s,
                                                std::size_t trials, std::uint64_t seed, double slack = 1e-12);

enum class GenMode { PositiveStrict, Permutation, Signed, Custom };

GenMode parse_gen_mode(const std::string& name);
std::string to_string(GenMode mode);

/// Row condition: every row sum of |A^(k)| is at most 1 + slack.
bool satisfies_row_condition(const FiberedOperator& t, double slack = kSubUnitalSlack);
/// Weighted column condition: sum_i M[k][i] |A^(k)[i][j]| <= M[k][j] (1 + slack).
bool satisfies_column_condition(const FiberedOperator& t, const VectorMeasure& m, double slack = kSubUnitalSlack);

struct GeneratedOperator {
  FiberedOperator op;
  /// Positive envelope of a signed draw; empty for the other modes.
  std::optional<FiberedOperator> majorant;
};

/// Draws an operator satisfying both endpoint conditions on every fiber, so
/// it is a contraction for every p in [1, inf] and satisfies T1 <= 1.
/// Custom mode validates `custom` instead of drawing. Throws
/// InfeasibleScaling when the conditions cannot be met.
GeneratedOperator gen_contraction(const Model& model, GenMode mode, std::uint64_t seed,
                                  const std::optional<FiberedOperator>& custom = std::nullopt);

}  // namespace bklat

#endif  // BKLATTICE_OPERATORS_HPP
