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
#ifndef BKLATTICE_CORE_LATTICE_HPP
#define BKLATTICE_CORE_LATTICE_HPP

// Finite-atom model of an L0-valued measure space and its Lp lattice.
//
// The base space has K atoms (the values of every L0 quantity), the Boolean
// algebra has N atoms, and the measure is a strictly positive K x N matrix
// whose row k is the fiber measure at base atom k. An element of the lattice
// is stored in its bundle representation: a K x N matrix whose row k is the
// fiber element at base atom k.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "bklattice/matrix.hpp"

namespace bklat {

class Rng;

inline constexpr double kInfP = std::numeric_limits<double>::infinity();

/// Throws InvalidP unless p is in [1, inf].
void check_p(double p);

class BaseSpace {
 public:
  explicit BaseSpace(std::vector<double> weights);
  static BaseSpace uniform(std::size_t atom_count);

  std::size_t atom_count() const noexcept { return weights_.size(); }
  const std::vector<double>& weights() const noexcept { return weights_; }

  friend bool operator==(const BaseSpace&, const BaseSpace&) = default;

 private:
  std::vector<double> weights_;
};

/// An element of L0 over the base space: one real per base atom.
struct L0Scalar {
  std::vector<double> values;

  L0Scalar() = default;
  explicit L0Scalar(std::vector<double> v) : values(std::move(v)) {}
  static L0Scalar constant(std::size_t k, double value) { return L0Scalar(std::vector<double>(k, value)); }
  static L0Scalar ones(std::size_t k) { return constant(k, 1.0); }

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t k) const { return values[k]; }
  double& operator[](std::size_t k) { return values[k]; }

  friend bool operator==(const L0Scalar&, const L0Scalar&) = default;
};

/// Entrywise a <= b + slack.
bool leq(const L0Scalar& a, const L0Scalar& b, double slack = 0.0);

class BooleanAtoms {
 public:
  explicit BooleanAtoms(std::size_t atom_count);
  std::size_t atom_count() const noexcept { return count_; }

  friend bool operator==(const BooleanAtoms&, const BooleanAtoms&) = default;

 private:
  std::size_t count_;
};

/// An element of the Boolean algebra: a set of atom indices (0-based).
using AtomSet = std::vector<std::size_t>;

AtomSet full_set(std::size_t n);
AtomSet complement(const AtomSet& e, std::size_t n);

class VectorMeasure {
 public:
  VectorMeasure() = default;
  explicit VectorMeasure(Matrix m) : matrix_(std::move(m)) {}
  static VectorMeasure uniform(std::size_t k, std::size_t n, double value = 1.0);

  const Matrix& matrix() const noexcept { return matrix_; }
  std::size_t fibers() const noexcept { return matrix_.rows(); }
  std::size_t atoms() const noexcept { return matrix_.cols(); }

  /// Fiber measure at base atom k (row k).
  std::span<const double> weights(std::size_t k) const { return matrix_.row(k); }

  /// m(e): the column sum over e, accumulated in ascending atom order.
  L0Scalar of(const AtomSet& e) const;

  friend bool operator==(const VectorMeasure&, const VectorMeasure&) = default;

 private:
  Matrix matrix_;
};

/// Throws ShapeMismatch or NonPositiveEntry(k, j) for the first entry (row
/// major) that is not strictly positive and finite.
void validate_measure(const VectorMeasure& m, const BaseSpace& base, const BooleanAtoms& atoms);

/// Base space, Boolean atoms and measure, validated together on construction.
struct Model {
  BaseSpace base;
  BooleanAtoms atoms;
  VectorMeasure measure;

  Model(BaseSpace b, BooleanAtoms a, VectorMeasure m);

  std::size_t fibers() const noexcept { return base.atom_count(); }
  std::size_t dim() const noexcept { return atoms.atom_count(); }

  static Model uniform(std::size_t k, std::size_t n);

  friend bool operator==(const Model&, const Model&) = default;
};

class Section {
 public:
  Section() = default;
  explicit Section(Matrix data) : data_(std::move(data)) {}
  static Section zero(std::size_t k, std::size_t n) { return Section(Matrix(k, n)); }
  /// The classical element f embedded with every fiber equal to f.
  static Section constant(std::size_t k, std::span<const double> f);
  /// Unit column j replicated across all K fibers.
  static Section basis(std::size_t k, std::size_t n, std::size_t j);

  std::size_t fibers() const noexcept { return data_.rows(); }
  std::size_t dim() const noexcept { return data_.cols(); }
  const Matrix& data() const noexcept { return data_; }
  Matrix& data() noexcept { return data_; }

  double operator()(std::size_t k, std::size_t j) const { return data_(k, j); }
  double& operator()(std::size_t k, std::size_t j) { return data_(k, j); }
  std::span<const double> fiber(std::size_t k) const { return data_.row(k); }
  std::span<double> fiber(std::size_t k) { return data_.row(k); }

  friend bool operator==(const Section&, const Section&) = default;

 private:
  Matrix data_;
};

Section operator+(const Section& a, const Section& b);
Section operator-(const Section& a, const Section& b);

/// L0-valued p-norm: entry k is (sum_j |F[k][j]|^p M[k][j])^(1/p), or
/// max_j |F[k][j]| for p = inf.
L0Scalar vec_norm(const Section& f, double p, const VectorMeasure& m);

/// Row k scaled by alpha[k].
Section module_mul(const L0Scalar& alpha, const Section& f);

Section abs(const Section& f);
Section join(const Section& f, const Section& g);
Section meet(const Section& f, const Section& g);
/// Entrywise f <= g + slack.
bool leq(const Section& f, const Section& g, double slack = 0.0);
bool is_nonnegative(const Section& f);

/// Keeps the columns in e, zeroes the rest.
Section indicator_mul(const AtomSet& e, const Section& f);

class PartitionOfUnity {
 public:
  /// Validates that the blocks are nonempty, disjoint, in range and cover
  /// {0, ..., n-1}; throws InvalidPartition otherwise.
  PartitionOfUnity(std::vector<AtomSet> blocks, std::size_t n);

  static PartitionOfUnity trivial(std::size_t n);
  static PartitionOfUnity atomic(std::size_t n);

  const std::vector<AtomSet>& blocks() const noexcept { return blocks_; }
  std::size_t size() const noexcept { return blocks_.size(); }
  std::size_t atom_count() const noexcept { return n_; }

  /// True iff every block of *this is a union of blocks of `finer`.
  bool is_refined_by(const PartitionOfUnity& finer) const;

  friend bool operator==(const PartitionOfUnity&, const PartitionOfUnity&) = default;

 private:
  std::vector<AtomSet> blocks_;
  std::size_t n_;
};

/// Chain from the trivial to the atomic partition, one block split per step
/// (N partitions in total). The deterministic chain peels the lowest atom off
/// the first composite block.
std::vector<PartitionOfUnity> refinement_chain(const BooleanAtoms& atoms);

/// Same shape of chain, but the block to split and the split point are drawn
/// from `rng`.
std::vector<PartitionOfUnity> random_refinement_chain(const BooleanAtoms& atoms, Rng& rng);

}  // namespace bklat

#endif  // BKLATTICE_CORE_LATTICE_HPP
