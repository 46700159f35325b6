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
#include "bklattice/core_lattice.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bklattice/rng.hpp"

namespace bklat {

void check_p(double p) {
  if (std::isnan(p) || p < 1.0) throw Error(Errc::InvalidP, "p must lie in [1, inf], got " + std::to_string(p));
}

BaseSpace::BaseSpace(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw Error(Errc::InvalidArgument, "base space needs at least one atom");
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    if (!(weights_[k] > 0.0) || !std::isfinite(weights_[k]))
      throw Error(Errc::NonPositiveWeight, "base atom weight must be positive and finite", k);
  }
}

BaseSpace BaseSpace::uniform(std::size_t atom_count) { return BaseSpace(std::vector<double>(atom_count, 1.0)); }

bool leq(const L0Scalar& a, const L0Scalar& b, double slack) {
  if (a.size() != b.size()) throw Error(Errc::ShapeMismatch, "L0 comparison length");
  for (std::size_t k = 0; k < a.size(); ++k)
    if (!(a[k] <= b[k] + slack)) return false;
  return true;
}

BooleanAtoms::BooleanAtoms(std::size_t atom_count) : count_(atom_count) {
  if (count_ == 0) throw Error(Errc::InvalidArgument, "Boolean algebra needs at least one atom");
}

AtomSet full_set(std::size_t n) {
  AtomSet e(n);
  for (std::size_t j = 0; j < n; ++j) e[j] = j;
  return e;
}

AtomSet complement(const AtomSet& e, std::size_t n) {
  std::vector<bool> in(n, false);
  for (auto j : e) {
    if (j >= n) throw Error(Errc::IndexOutOfRange, "atom index " + std::to_string(j));
    in[j] = true;
  }
  AtomSet out;
  for (std::size_t j = 0; j < n; ++j)
    if (!in[j]) out.push_back(j);
  return out;
}

VectorMeasure VectorMeasure::uniform(std::size_t k, std::size_t n, double value) {
  return VectorMeasure(Matrix(k, n, value));
}

L0Scalar VectorMeasure::of(const AtomSet& e) const {
  AtomSet sorted = e;
  std::sort(sorted.begin(), sorted.end());
  L0Scalar out = L0Scalar::constant(fibers(), 0.0);
  for (std::size_t k = 0; k < fibers(); ++k) {
    double s = 0.0;
    for (auto j : sorted) {
      if (j >= atoms()) throw Error(Errc::IndexOutOfRange, "atom index " + std::to_string(j));
      s += matrix_(k, j);
    }
    out[k] = s;
  }
  return out;
}

void validate_measure(const VectorMeasure& m, const BaseSpace& base, const BooleanAtoms& atoms) {
  if (m.fibers() != base.atom_count() || m.atoms() != atoms.atom_count())
    throw Error(Errc::ShapeMismatch, "measure must be " + std::to_string(base.atom_count()) + "x" +
                                         std::to_string(atoms.atom_count()));
  for (std::size_t k = 0; k < m.fibers(); ++k) {
    for (std::size_t j = 0; j < m.atoms(); ++j) {
      const double v = m.matrix()(k, j);
      if (!(v > 0.0) || !std::isfinite(v))
        throw Error(Errc::NonPositiveEntry,
                    "measure entry (" + std::to_string(k) + "," + std::to_string(j) + ") is not positive and finite",
                    k, j);
    }
  }
}

Model::Model(BaseSpace b, BooleanAtoms a, VectorMeasure m)
    : base(std::move(b)), atoms(a), measure(std::move(m)) {
  validate_measure(measure, base, atoms);
}

Model Model::uniform(std::size_t k, std::size_t n) {
  return Model(BaseSpace::uniform(k), BooleanAtoms(n), VectorMeasure::uniform(k, n));
}

Section Section::constant(std::size_t k, std::span<const double> f) {
  Matrix m(k, f.size());
  for (std::size_t r = 0; r < k; ++r) std::copy(f.begin(), f.end(), m.row(r).begin());
  return Section(std::move(m));
}

Section Section::basis(std::size_t k, std::size_t n, std::size_t j) {
  if (j >= n) throw Error(Errc::IndexOutOfRange, "basis index " + std::to_string(j));
  Matrix m(k, n);
  for (std::size_t r = 0; r < k; ++r) m(r, j) = 1.0;
  return Section(std::move(m));
}

Section operator+(const Section& a, const Section& b) { return Section(a.data() + b.data()); }
Section operator-(const Section& a, const Section& b) { return Section(a.data() - b.data()); }

namespace {

void require_same_shape(const Section& f, const Section& g) {
  if (f.fibers() != g.fibers() || f.dim() != g.dim()) throw Error(Errc::ShapeMismatch, "section shapes differ");
}

}  // namespace

L0Scalar vec_norm(const Section& f, double p, const VectorMeasure& m) {
  check_p(p);
  if (f.fibers() != m.fibers() || f.dim() != m.atoms())
    throw Error(Errc::ShapeMismatch, "section and measure shapes differ");
  L0Scalar out = L0Scalar::constant(f.fibers(), 0.0);
  for (std::size_t k = 0; k < f.fibers(); ++k) {
    const auto row = f.fiber(k);
    if (std::isinf(p)) {
      double mx = 0.0;
      for (double v : row) mx = std::max(mx, std::fabs(v));
      out[k] = mx;
      continue;
    }
    const auto w = m.weights(k);
    double s = 0.0;
    if (p == 1.0) {
      for (std::size_t j = 0; j < row.size(); ++j) s += std::fabs(row[j]) * w[j];
      out[k] = s;
    } else {
      for (std::size_t j = 0; j < row.size(); ++j) s += std::pow(std::fabs(row[j]), p) * w[j];
      out[k] = std::pow(s, 1.0 / p);
    }
  }
  return out;
}

Section module_mul(const L0Scalar& alpha, const Section& f) {
  if (alpha.size() != f.fibers()) throw Error(Errc::ShapeMismatch, "L0 scalar length differs from fiber count");
  Section out = f;
  for (std::size_t k = 0; k < f.fibers(); ++k)
    for (double& v : out.fiber(k)) v *= alpha[k];
  return out;
}

Section abs(const Section& f) { return Section(entrywise_abs(f.data())); }

Section join(const Section& f, const Section& g) {
  require_same_shape(f, g);
  Section out = f;
  for (std::size_t i = 0; i < out.data().data().size(); ++i)
    out.data().data()[i] = std::max(f.data().data()[i], g.data().data()[i]);
  return out;
}

Section meet(const Section& f, const Section& g) {
  require_same_shape(f, g);
  Section out = f;
  for (std::size_t i = 0; i < out.data().data().size(); ++i)
    out.data().data()[i] = std::min(f.data().data()[i], g.data().data()[i]);
  return out;
}

bool leq(const Section& f, const Section& g, double slack) {
  require_same_shape(f, g);
  const auto a = f.data().data();
  const auto b = g.data().data();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i] <= b[i] + slack)) return false;
  return true;
}

bool is_nonnegative(const Section& f) { return all_nonnegative(f.data()); }

Section indicator_mul(const AtomSet& e, const Section& f) {
  std::vector<bool> keep(f.dim(), false);
  for (auto j : e) {
    if (j >= f.dim()) throw Error(Errc::IndexOutOfRange, "atom index " + std::to_string(j));
    keep[j] = true;
  }
  Section out = f;
  for (std::size_t k = 0; k < f.fibers(); ++k)
    for (std::size_t j = 0; j < f.dim(); ++j)
      if (!keep[j]) out(k, j) = 0.0;
  return out;
}

PartitionOfUnity::PartitionOfUnity(std::vector<AtomSet> blocks, std::size_t n) : blocks_(std::move(blocks)), n_(n) {
  std::vector<bool> seen(n, false);
  std::size_t covered = 0;
  for (auto& b : blocks_) {
    if (b.empty()) throw Error(Errc::InvalidPartition, "empty block");
    std::sort(b.begin(), b.end());
    for (auto j : b) {
      if (j >= n) throw Error(Errc::InvalidPartition, "atom index " + std::to_string(j) + " out of range");
      if (seen[j]) throw Error(Errc::InvalidPartition, "atom " + std::to_string(j) + " in two blocks");
      seen[j] = true;
      ++covered;
    }
  }
  if (covered != n) throw Error(Errc::InvalidPartition, "blocks do not cover every atom");
}

PartitionOfUnity PartitionOfUnity::trivial(std::size_t n) { return PartitionOfUnity({full_set(n)}, n); }

PartitionOfUnity PartitionOfUnity::atomic(std::size_t n) {
  std::vector<AtomSet> blocks(n);
  for (std::size_t j = 0; j < n; ++j) blocks[j] = {j};
  return PartitionOfUnity(std::move(blocks), n);
}

bool PartitionOfUnity::is_refined_by(const PartitionOfUnity& finer) const {
  if (finer.n_ != n_) return false;
  std::vector<std::size_t> owner(n_);
  for (std::size_t b = 0; b < blocks_.size(); ++b)
    for (auto j : blocks_[b]) owner[j] = b;
  // Each finer block must sit inside a single coarse block.
  for (const auto& fb : finer.blocks_) {
    const auto o = owner[fb.front()];
    for (auto j : fb)
      if (owner[j] != o) return false;
  }
  return true;
}

std::vector<PartitionOfUnity> refinement_chain(const BooleanAtoms& atoms) {
  const std::size_t n = atoms.atom_count();
  std::vector<PartitionOfUnity> chain{PartitionOfUnity::trivial(n)};
  while (chain.back().size() < n) {
    auto blocks = chain.back().blocks();
    auto it = std::find_if(blocks.begin(), blocks.end(), [](const AtomSet& b) { return b.size() > 1; });
    AtomSet head{it->front()};
    it->erase(it->begin());
    blocks.insert(it, std::move(head));
    chain.emplace_back(std::move(blocks), n);
  }
  return chain;
}

std::vector<PartitionOfUnity> random_refinement_chain(const BooleanAtoms& atoms, Rng& rng) {
  const std::size_t n = atoms.atom_count();
  std::vector<PartitionOfUnity> chain{PartitionOfUnity::trivial(n)};
  while (chain.back().size() < n) {
    auto blocks = chain.back().blocks();
    std::vector<std::size_t> composite;
    for (std::size_t b = 0; b < blocks.size(); ++b)
      if (blocks[b].size() > 1) composite.push_back(b);
    auto& victim = blocks[composite[rng.index(0, composite.size() - 1)]];
    for (std::size_t i = victim.size(); i > 1; --i) std::swap(victim[i - 1], victim[rng.index(0, i - 1)]);
    const std::size_t cut = rng.index(1, victim.size() - 1);
    AtomSet tail(victim.begin() + static_cast<std::ptrdiff_t>(cut), victim.end());
    victim.resize(cut);
    blocks.push_back(std::move(tail));
    chain.emplace_back(std::move(blocks), n);
  }
  return chain;
}

}  // namespace bklat
