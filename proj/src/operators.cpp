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
#include "bklattice/operators.hpp"

#include <algorithm>
#include <cmath>

#include "bklattice/rng.hpp"

namespace bklat {

FiberedOperator::FiberedOperator(std::vector<Matrix> fibers, OperatorFlags flags)
    : fibers_(std::move(fibers)), flags_(std::move(flags)) {
  if (fibers_.empty()) throw Error(Errc::InvalidArgument, "operator needs at least one fiber");
  const std::size_t n = fibers_.front().rows();
  if (n == 0) throw Error(Errc::InvalidArgument, "operator fibers must be nonempty");
  for (const auto& a : fibers_) {
    if (a.rows() != n || a.cols() != n) throw Error(Errc::ShapeMismatch, "every fiber must be the same square size");
  }
  if (flags_.positive && *flags_.positive != is_positive())
    throw Error(Errc::InvalidArgument, "stored positive flag disagrees with the matrices");
  if (flags_.sub_unital && *flags_.sub_unital != is_sub_unital())
    throw Error(Errc::InvalidArgument, "stored sub_unital flag disagrees with the matrices");
}

FiberedOperator FiberedOperator::identity(std::size_t k, std::size_t n) {
  return FiberedOperator(std::vector<Matrix>(k, Matrix::identity(n)));
}

FiberedOperator FiberedOperator::zero(std::size_t k, std::size_t n) {
  return FiberedOperator(std::vector<Matrix>(k, Matrix(n, n)));
}

FiberedOperator FiberedOperator::constant(std::size_t k, const Matrix& a) {
  return FiberedOperator(std::vector<Matrix>(k, a));
}

bool FiberedOperator::is_positive() const {
  return std::all_of(fibers_.begin(), fibers_.end(), [](const Matrix& a) { return all_nonnegative(a); });
}

bool FiberedOperator::is_sub_unital() const {
  for (const auto& a : fibers_) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
      double s = 0.0;
      for (double v : a.row(i)) s += v;
      if (s > 1.0 + kSubUnitalSlack) return false;
    }
  }
  return true;
}

FiberedOperator FiberedOperator::with_derived_flags() const {
  OperatorFlags f = flags_;
  f.positive = is_positive();
  f.sub_unital = is_sub_unital();
  return FiberedOperator(fibers_, std::move(f));
}

namespace {

void require_compatible(const FiberedOperator& t, const FiberedOperator& s) {
  if (t.fibers() != s.fibers() || t.dim() != s.dim()) throw Error(Errc::ShapeMismatch, "operator shapes differ");
}

}  // namespace

FiberedOperator operator-(const FiberedOperator& t, const FiberedOperator& s) {
  require_compatible(t, s);
  std::vector<Matrix> out;
  out.reserve(t.fibers());
  for (std::size_t k = 0; k < t.fibers(); ++k) out.push_back(t.fiber(k) - s.fiber(k));
  return FiberedOperator(std::move(out));
}

FiberedOperator operator+(const FiberedOperator& t, const FiberedOperator& s) {
  require_compatible(t, s);
  std::vector<Matrix> out;
  out.reserve(t.fibers());
  for (std::size_t k = 0; k < t.fibers(); ++k) out.push_back(t.fiber(k) + s.fiber(k));
  return FiberedOperator(std::move(out));
}

FiberedOperator operator*(double c, const FiberedOperator& t) {
  std::vector<Matrix> out;
  out.reserve(t.fibers());
  for (const auto& a : t.matrices()) out.push_back(c * a);
  return FiberedOperator(std::move(out));
}

Section apply(const FiberedOperator& t, const Section& f) {
  if (f.fibers() != t.fibers() || f.dim() != t.dim()) throw Error(Errc::ShapeMismatch, "operator/section shapes");
  Section out = Section::zero(f.fibers(), f.dim());
  for (std::size_t k = 0; k < t.fibers(); ++k) {
    const auto y = matvec(t.fiber(k), f.fiber(k));
    std::copy(y.begin(), y.end(), out.fiber(k).begin());
  }
  return out;
}

FiberedOperator compose(const FiberedOperator& t, const FiberedOperator& s) {
  require_compatible(t, s);
  std::vector<Matrix> out;
  out.reserve(t.fibers());
  for (std::size_t k = 0; k < t.fibers(); ++k) out.push_back(matmul(t.fiber(k), s.fiber(k)));
  return FiberedOperator(std::move(out));
}

FiberedOperator power(const FiberedOperator& t, unsigned n) {
  FiberedOperator acc = FiberedOperator::identity(t.fibers(), t.dim());
  for (unsigned i = 0; i < n; ++i) acc = compose(t, acc);
  return acc;
}

Section partition_step(const FiberedOperator& t, const PartitionOfUnity& pi, const Section& f) {
  if (!is_nonnegative(f)) throw Error(Errc::NegativeInput, "partition_step needs a nonnegative section");
  if (pi.atom_count() != f.dim()) throw Error(Errc::ShapeMismatch, "partition and section dimensions differ");
  Section acc = Section::zero(f.fibers(), f.dim());
  for (const auto& block : pi.blocks()) acc = acc + abs(apply(t, indicator_mul(block, f)));
  return acc;
}

ModulusReport modulus_net(const FiberedOperator& t) {
  const std::size_t k = t.fibers();
  const std::size_t n = t.dim();
  const auto chain = refinement_chain(BooleanAtoms(n));

  std::vector<Section> probes;
  probes.reserve(n + 1);
  for (std::size_t j = 0; j < n; ++j) probes.push_back(Section::basis(k, n, j));
  probes.push_back(Section(Matrix(k, n, 1.0)));

  ModulusReport report;
  report.net_values.reserve(chain.size());
  for (const auto& pi : chain) {
    std::vector<Section> values;
    values.reserve(probes.size());
    for (const auto& probe : probes) values.push_back(partition_step(t, pi, probe));
    report.net_values.push_back(std::move(values));
  }

  const auto& last = report.net_values.back();
  std::size_t stable = report.net_values.size() - 1;
  while (stable > 0 && report.net_values[stable - 1] == last) --stable;
  report.steps_to_stabilize = stable;

  // Column j of |A^(k)| is fiber k of the atomic-partition value on e_j.
  std::vector<Matrix> fibers(k, Matrix(n, n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t r = 0; r < k; ++r) {
      const auto col = last[j].fiber(r);
      for (std::size_t i = 0; i < n; ++i) fibers[r](i, j) = col[i];
    }
  }
  report.modulus = FiberedOperator(std::move(fibers));
  return report;
}

FiberedOperator modulus_direct(const FiberedOperator& t) {
  std::vector<Matrix> out;
  out.reserve(t.fibers());
  for (const auto& a : t.matrices()) out.push_back(entrywise_abs(a));
  return FiberedOperator(std::move(out));
}

namespace {

std::optional<MajorantViolation> first_violation(const FiberedOperator& a, const FiberedOperator& s,
                                                 const Section& f, double slack) {
  const Section lhs = abs(apply(a, f));
  const Section rhs = apply(s, abs(f));
  for (std::size_t k = 0; k < f.fibers(); ++k) {
    for (std::size_t i = 0; i < f.dim(); ++i) {
      if (!(lhs(k, i) <= rhs(k, i) + slack * (1.0 + std::fabs(rhs(k, i)))))
        return MajorantViolation{f, k, i, lhs(k, i), rhs(k, i)};
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<MajorantViolation> majorant_check(const FiberedOperator& a, const FiberedOperator& s,
                                                std::size_t trials, std::uint64_t seed, double slack) {
  require_compatible(a, s);
  if (!s.is_positive()) throw Error(Errc::NotPositive, "majorant must be a positive operator");
  const std::size_t k = a.fibers();
  const std::size_t n = a.dim();
  for (std::size_t j = 0; j < n; ++j) {
    if (auto v = first_violation(a, s, Section::basis(k, n, j), slack)) return v;
  }
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = Rng::substream(seed, t);
    Section f = Section::zero(k, n);
    for (double& v : f.data().data()) v = rng.uniform(-1.0, 1.0);
    if (auto v = first_violation(a, s, f, slack)) return v;
  }
  return std::nullopt;
}

GenMode parse_gen_mode(const std::string& name) {
  if (name == "positive-strict") return GenMode::PositiveStrict;
  if (name == "permutation") return GenMode::Permutation;
  if (name == "signed") return GenMode::Signed;
  if (name == "custom") return GenMode::Custom;
  throw Error(Errc::InvalidArgument, "unknown generator mode '" + name + "'");
}

std::string to_string(GenMode mode) {
  switch (mode) {
    case GenMode::PositiveStrict: return "positive-strict";
    case GenMode::Permutation: return "permutation";
    case GenMode::Signed: return "signed";
    case GenMode::Custom: return "custom";
  }
  return "unknown";
}

bool satisfies_row_condition(const FiberedOperator& t, double slack) {
  for (const auto& a : t.matrices()) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
      double s = 0.0;
      for (double v : a.row(i)) s += std::fabs(v);
      if (s > 1.0 + slack) return false;
    }
  }
  return true;
}

bool satisfies_column_condition(const FiberedOperator& t, const VectorMeasure& m, double slack) {
  if (m.fibers() != t.fibers() || m.atoms() != t.dim()) throw Error(Errc::ShapeMismatch, "operator/measure shapes");
  for (std::size_t k = 0; k < t.fibers(); ++k) {
    const auto& a = t.fiber(k);
    const auto w = m.weights(k);
    for (std::size_t j = 0; j < a.cols(); ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < a.rows(); ++i) s += w[i] * std::fabs(a(i, j));
      if (s > w[j] * (1.0 + slack)) return false;
    }
  }
  return true;
}

namespace {

// Positive matrix with row sums 1 and weighted column sums w_j, up to the
// final downward clamps which only ever shrink entries.
Matrix positive_fiber(std::span<const double> w, Rng& rng) {
  const std::size_t n = w.size();
  Matrix b(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b(i, j) = w[i] * rng.uniform(0.05, 1.0);

  // Sinkhorn on diag(w) A with both marginals equal to w.
  for (int it = 0; it < 2000; ++it) {
    double dev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += b(i, j);
      dev = std::max(dev, std::fabs(s / w[i] - 1.0));
      for (std::size_t j = 0; j < n; ++j) b(i, j) *= w[i] / s;
    }
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += b(i, j);
      dev = std::max(dev, std::fabs(s / w[j] - 1.0));
      for (std::size_t i = 0; i < n; ++i) b(i, j) *= w[j] / s;
    }
    if (dev < 1e-15) break;
  }

  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = b(i, j) / w[i];

  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += a(i, j);
    if (s > 1.0)
      for (std::size_t j = 0; j < n; ++j) a(i, j) /= s;
  }
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * a(i, j);
    if (s > w[j])
      for (std::size_t i = 0; i < n; ++i) a(i, j) *= w[j] / s;
  }
  return a;
}

void require_endpoint_conditions(const FiberedOperator& t, const VectorMeasure& m) {
  if (!satisfies_row_condition(t)) throw Error(Errc::InfeasibleScaling, "row sums exceed 1");
  if (!satisfies_column_condition(t, m)) throw Error(Errc::InfeasibleScaling, "weighted column sums exceed weights");
}

}  // namespace

GeneratedOperator gen_contraction(const Model& model, GenMode mode, std::uint64_t seed,
                                  const std::optional<FiberedOperator>& custom) {
  const std::size_t k = model.fibers();
  const std::size_t n = model.dim();
  const VectorMeasure& m = model.measure;
  GeneratedOperator out;

  switch (mode) {
    case GenMode::PositiveStrict:
    case GenMode::Signed: {
      Rng rng(seed);
      std::vector<Matrix> fibers;
      fibers.reserve(k);
      for (std::size_t r = 0; r < k; ++r) fibers.push_back(positive_fiber(m.weights(r), rng));
      FiberedOperator positive(std::move(fibers));
      require_endpoint_conditions(positive, m);
      if (mode == GenMode::PositiveStrict) {
        out.op = positive;
        break;
      }
      Rng signs = Rng::substream(seed, 1);
      std::vector<Matrix> flipped = positive.matrices();
      for (auto& a : flipped)
        for (double& v : a.data())
          if (signs.coin()) v = -v;
      out.op = FiberedOperator(std::move(flipped));
      out.majorant = positive;
      break;
    }
    case GenMode::Permutation: {
      Rng rng(seed);
      const std::size_t shift = n == 1 ? 0 : rng.index(1, n - 1);
      Matrix p(n, n);
      for (std::size_t i = 0; i < n; ++i) p(i, (i + shift) % n) = 1.0;
      out.op = FiberedOperator::constant(k, p);
      require_endpoint_conditions(out.op, m);
      break;
    }
    case GenMode::Custom: {
      if (!custom) throw Error(Errc::InvalidArgument, "custom mode needs an operator");
      if (custom->fibers() != k || custom->dim() != n) throw Error(Errc::ShapeMismatch, "custom operator shape");
      require_endpoint_conditions(*custom, m);
      out.op = *custom;
      break;
    }
  }
  out.op = out.op.with_derived_flags();
  if (out.majorant) out.majorant = out.majorant->with_derived_flags();
  return out;
}

}  // namespace bklat
