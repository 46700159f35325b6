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
#include "bklattice/zerotwo.hpp"

#include <algorithm>
#include <cmath>

namespace bklat {

void require_dichotomy_preconditions(const FiberedOperator& t, const VectorMeasure& m, double p, double slack,
                                     const NormOptions& norm) {
  check_p(p);
  if (!t.is_positive()) throw Error(Errc::NotPositive, "operator has a negative entry");
  if (!t.is_sub_unital()) throw Error(Errc::NotSubUnital, "operator violates T1 <= 1");
  const L0Scalar nrm = l0_opnorm(t, m, p, norm);
  for (std::size_t k = 0; k < nrm.size(); ++k) {
    if (!(nrm[k] <= 1.0 + slack))
      throw Error(Errc::NotContraction, "fiber " + std::to_string(k) + " has norm " + std::to_string(nrm[k]) +
                                            " > 1 at p = " + std::to_string(p), k);
  }
}

DichotomyTrace run_dichotomy(const FiberedOperator& t, const VectorMeasure& m, double p, unsigned n_max,
                             const DichotomyOptions& opts) {
  require_dichotomy_preconditions(t, m, p, opts.contraction_slack, opts.norm);

  DichotomyTrace trace;
  trace.p = p;
  trace.n_max = n_max;
  trace.two_tol = opts.two_tol;
  trace.d.reserve(n_max + 1);

  FiberedOperator current = FiberedOperator::identity(t.fibers(), t.dim());
  for (unsigned n = 0; n <= n_max; ++n) {
    FiberedOperator next = compose(t, current);
    std::vector<Matrix> flushed = next.matrices();
    for (auto& a : flushed) {
      for (double& v : a.data()) {
        if (v != 0.0 && std::fabs(v) < 1e-300) {
          v = 0.0;
          ++trace.flushed_entries;
        }
      }
    }
    next = FiberedOperator(std::move(flushed));

    const FiberedOperator delta = next - current;
    const FiberedOperator mod = modulus_direct(delta);
    if (opts.recheck_every != 0 && n % opts.recheck_every == 0) {
      if (!(modulus_net(delta).modulus == mod))
        throw Error(Errc::CheckFailed, "partition-net modulus disagrees with entrywise modulus at n = " +
                                           std::to_string(n));
      ++trace.net_rechecks;
    }
    trace.d.push_back(l0_opnorm(mod, m, p, opts.norm).values);
    current = std::move(next);
  }

  for (unsigned n = 0; n <= n_max; ++n) {
    const auto& row = trace.d[n];
    if (std::all_of(row.begin(), row.end(), [&](double v) { return v < 2.0 - opts.two_tol; })) {
      trace.hypothesis_m = n;
      break;
    }
  }
  return trace;
}

std::vector<bool> check_hypothesis(const DichotomyTrace& trace, unsigned m, double two_tol) {
  if (m >= trace.d.size()) throw Error(Errc::IndexOutOfRange, "m = " + std::to_string(m) + " exceeds n_max");
  std::vector<bool> out;
  out.reserve(trace.fibers());
  for (double v : trace.d[m]) out.push_back(v < 2.0 - two_tol);
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::ConvergesToZero: return "converges-to-zero";
    case Verdict::StuckAtTwo: return "stuck-at-two";
    case Verdict::Undecided: return "undecided";
  }
  return "unknown";
}

std::vector<FiberVerdict> classify(const DichotomyTrace& trace, double zero_tol, double two_tol) {
  std::vector<FiberVerdict> out;
  if (trace.d.empty()) return out;
  for (std::size_t k = 0; k < trace.fibers(); ++k) {
    FiberVerdict v;
    v.fiber = k;
    v.final_value = trace.d.back()[k];
    double min_d = trace.d.front()[k];
    for (std::size_t n = 0; n < trace.d.size(); ++n) {
      const double dk = trace.d[n][k];
      min_d = std::min(min_d, dk);
      if (!v.first_below_2 && dk < 2.0 - two_tol) v.first_below_2 = static_cast<unsigned>(n);
    }
    if (v.final_value < zero_tol)
      v.verdict = Verdict::ConvergesToZero;
    else if (min_d >= 2.0 - two_tol)
      v.verdict = Verdict::StuckAtTwo;
    else
      v.verdict = Verdict::Undecided;
    out.push_back(std::move(v));
  }
  return out;
}

FiberGlobalReport compare_fiber_global(const FiberedOperator& t, const FiberedOperator& s, const VectorMeasure& m,
                                       double p, const NormOptions& norm) {
  require_dichotomy_preconditions(t, m, p, 1e-10, norm);
  require_dichotomy_preconditions(s, m, p, 1e-10, norm);

  const FiberedOperator global_modulus = modulus_net(t - s).modulus;
  FiberGlobalReport report;
  report.global_path = l0_opnorm(global_modulus, m, p, norm).values;
  report.fiber_path.resize(t.fibers());
  for (std::size_t k = 0; k < t.fibers(); ++k) {
    // Single-fiber model: only fiber k of T and S, measured by row k of M.
    const FiberedOperator fiber_mod(std::vector<Matrix>{entrywise_abs(t.fiber(k) - s.fiber(k))});
    Matrix row(1, m.atoms());
    std::copy(m.weights(k).begin(), m.weights(k).end(), row.row(0).begin());
    report.fiber_path[k] = l0_opnorm(fiber_mod, VectorMeasure(std::move(row)), p, norm)[0];
  }
  for (std::size_t k = 0; k < t.fibers(); ++k) {
    const double a = report.global_path[k];
    const double b = report.fiber_path[k];
    const double scale = std::max(std::fabs(a), std::fabs(b));
    if (scale > 0.0) report.max_rel_discrepancy = std::max(report.max_rel_discrepancy, std::fabs(a - b) / scale);
    if (!(a <= b + 1e-12)) report.fiber_dominates = false;
  }
  return report;
}

}  // namespace bklat
