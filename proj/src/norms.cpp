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
#include "bklattice/norms.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "bklattice/rng.hpp"

namespace bklat {

std::string to_string(NormMethod m) {
  switch (m) {
    case NormMethod::ExactP1: return "exact-p1";
    case NormMethod::ExactP2: return "exact-p2";
    case NormMethod::ExactPInf: return "exact-pinf";
    case NormMethod::Boyd: return "boyd";
    case NormMethod::Oracle: return "oracle";
  }
  return "unknown";
}

namespace {

void check_weights(const Matrix& a, std::span<const double> w) {
  if (a.rows() != a.cols() || a.rows() != w.size()) throw Error(Errc::ShapeMismatch, "matrix/weight dimensions");
  for (std::size_t i = 0; i < w.size(); ++i)
    if (!(w[i] > 0.0) || !std::isfinite(w[i])) throw Error(Errc::NonPositiveWeight, "weights must be positive", i);
}

double unweighted_pnorm(std::span<const double> x, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::fabs(v));
    return m;
  }
  double s = 0.0;
  for (double v : x) s += std::pow(std::fabs(v), p);
  return std::pow(s, 1.0 / p);
}

double signed_pow(double v, double e) { return std::copysign(std::pow(std::fabs(v), e), v); }

}  // namespace

double weighted_pnorm(std::span<const double> x, std::span<const double> w, double p) {
  if (x.size() != w.size()) throw Error(Errc::ShapeMismatch, "vector/weight lengths");
  if (std::isinf(p)) return unweighted_pnorm(x, p);
  double s = 0.0;
  if (p == 1.0) {
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::fabs(x[i]);
    return s;
  }
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(std::fabs(x[i]), p);
  return std::pow(s, 1.0 / p);
}

double norm_ratio(const Matrix& a, std::span<const double> w, double p, std::span<const double> x) {
  const double den = weighted_pnorm(x, w, p);
  if (den == 0.0) return 0.0;
  const auto y = matvec(a, x);
  return weighted_pnorm(y, w, p) / den;
}

Matrix weighted_similarity(const Matrix& a, std::span<const double> w, double p) {
  check_weights(a, w);
  if (std::isinf(p)) return a;
  Matrix b = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) b(i, j) = std::pow(w[i] / w[j], 1.0 / p) * a(i, j);
  return b;
}

NormResult opnorm_exact(const Matrix& a, std::span<const double> w, double p) {
  check_weights(a, w);
  const std::size_t n = a.rows();
  NormResult r;
  r.certificate.assign(n, 0.0);
  if (p == 1.0) {
    r.method = NormMethod::ExactP1;
    std::size_t best = 0;
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += w[i] * std::fabs(a(i, j));
      s /= w[j];
      if (j == 0 || s > r.value) {
        r.value = s;
        best = j;
      }
    }
    r.certificate[best] = 1.0;
  } else if (std::isinf(p)) {
    r.method = NormMethod::ExactPInf;
    std::size_t best = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += std::fabs(a(i, j));
      if (i == 0 || s > r.value) {
        r.value = s;
        best = i;
      }
    }
    for (std::size_t j = 0; j < n; ++j) r.certificate[j] = a(best, j) < 0.0 ? -1.0 : 1.0;
  } else if (p == 2.0) {
    r.method = NormMethod::ExactP2;
    const Matrix b = weighted_similarity(a, w, 2.0);
    Eigen::MatrixXd eb(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) eb(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = b(i, j);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(eb, Eigen::ComputeFullV);
    r.value = svd.singularValues()(0);
    const auto v = svd.matrixV().col(0);
    for (std::size_t j = 0; j < n; ++j) r.certificate[j] = v(static_cast<Eigen::Index>(j)) / std::sqrt(w[j]);
  } else {
    throw Error(Errc::InvalidP, "closed forms exist only for p in {1, 2, inf}");
  }
  return r;
}

NormResult opnorm_boyd(const Matrix& a, std::span<const double> w, double p, double tol, int max_iter) {
  check_weights(a, w);
  if (!(p > 1.0) || std::isinf(p)) throw Error(Errc::InvalidP, "Boyd iteration needs 1 < p < inf");
  if (!(tol > 0.0)) throw Error(Errc::InvalidArgument, "tol must be positive");
  const std::size_t n = a.rows();
  const double q = p / (p - 1.0);

  Matrix b = weighted_similarity(a, w, p);
  double scale = 0.0;
  for (double v : b.data()) scale = std::max(scale, std::fabs(v));

  NormResult r;
  r.method = NormMethod::Boyd;
  r.certificate.assign(n, 1.0);
  if (scale == 0.0) return r;
  // Rescale so the duality maps below neither underflow nor overflow.
  for (double& v : b.data()) v /= scale;
  const Matrix bt = transpose(b);

  std::vector<double> x(n, std::pow(static_cast<double>(n), -1.0 / p));
  std::vector<double> best_x = x;
  std::vector<double> dual(n);
  double best = 0.0;
  double prev = -1.0;
  r.converged = false;
  for (int it = 1; it <= max_iter; ++it) {
    r.iterations = it;
    const auto y = matvec(b, x);
    const double s = unweighted_pnorm(y, p);
    if (s > best) {
      best = s;
      best_x = x;
    }
    if (s == 0.0 || (prev >= 0.0 && std::fabs(s - prev) <= tol * s)) {
      r.converged = true;
      break;
    }
    prev = s;
    for (std::size_t i = 0; i < n; ++i) dual[i] = signed_pow(y[i] / s, p - 1.0);
    auto z = matvec(bt, dual);
    for (double& v : z) v = signed_pow(v, q - 1.0);
    const double zn = unweighted_pnorm(z, p);
    if (zn == 0.0) {
      r.converged = true;
      break;
    }
    for (std::size_t i = 0; i < n; ++i) x[i] = z[i] / zn;
  }
  r.value = best * scale;
  for (std::size_t i = 0; i < n; ++i) r.certificate[i] = best_x[i] / std::pow(w[i], 1.0 / p);
  return r;
}

NormResult opnorm_oracle(const Matrix& a, std::span<const double> w, double p, std::size_t samples,
                         std::uint64_t seed) {
  check_weights(a, w);
  check_p(p);
  if (samples == 0) throw Error(Errc::InvalidArgument, "oracle needs at least one sample");
  const std::size_t n = a.rows();

  std::vector<double> best_x(n, 1.0);
  double best = norm_ratio(a, w, p, best_x);
  auto consider = [&](const std::vector<double>& x) {
    const double v = norm_ratio(a, w, p, x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  };
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    consider(e);
    e[j] = -1.0;
    consider(e);
  }
  std::vector<double> x(n);
  for (std::size_t s = 0; s < samples; ++s) {
    Rng rng = Rng::substream(seed, s);
    for (double& v : x) v = rng.uniform(-1.0, 1.0);
    consider(x);
  }

  // Fixed-point polish on the weighted stationarity condition
  // A^T W psi_p(Ax) = lambda W psi_p(x), worked in the original coordinates.
  // Only improvements are kept, so the result stays an evaluated lower bound.
  if (p > 1.0 && !std::isinf(p)) {
    const double q = p / (p - 1.0);
    const Matrix at = transpose(a);
    std::vector<double> cur = best_x;
    double prev = best;
    for (int it = 0; it < 10000; ++it) {
      auto y = matvec(a, cur);
      for (std::size_t i = 0; i < n; ++i) y[i] = w[i] * signed_pow(y[i], p - 1.0);
      auto z = matvec(at, y);
      double zmax = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        z[i] = signed_pow(z[i] / w[i], q - 1.0);
        zmax = std::max(zmax, std::fabs(z[i]));
      }
      if (zmax == 0.0 || !std::isfinite(zmax)) break;
      for (std::size_t i = 0; i < n; ++i) cur[i] = z[i] / zmax;
      const double v = norm_ratio(a, w, p, cur);
      if (v > best) {
        best = v;
        best_x = cur;
      }
      if (std::fabs(v - prev) <= 1e-16 * v) break;
      prev = v;
    }
  }

  // Pattern search: try +-step on each coordinate, halve the step when no
  // move improves.
  double mag = 0.0;
  for (double v : best_x) mag = std::max(mag, std::fabs(v));
  double step = 0.5 * mag;
  int iterations = 0;
  while (step > 1e-14 * mag && iterations < 200000) {
    bool improved = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (double dir : {1.0, -1.0}) {
        x = best_x;
        x[i] += dir * step;
        ++iterations;
        const double v = norm_ratio(a, w, p, x);
        if (v > best) {
          best = v;
          best_x = x;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }

  NormResult r;
  r.method = NormMethod::Oracle;
  r.value = best;
  r.iterations = iterations;
  r.certificate = std::move(best_x);
  return r;
}

double interpolation_bound(const Matrix& a, std::span<const double> w, double p) {
  check_p(p);
  const double n1 = opnorm_exact(a, w, 1.0).value;
  const double ninf = opnorm_exact(a, w, kInfP).value;
  if (std::isinf(p)) return ninf;
  return std::pow(n1, 1.0 / p) * std::pow(ninf, 1.0 - 1.0 / p);
}

std::vector<NormResult> l0_opnorm_detailed(const FiberedOperator& t, const VectorMeasure& m, double p,
                                           const NormOptions& opts) {
  check_p(p);
  if (m.fibers() != t.fibers() || m.atoms() != t.dim()) throw Error(Errc::ShapeMismatch, "operator/measure shapes");
  std::vector<NormResult> out;
  out.reserve(t.fibers());
  const bool closed_form = p == 1.0 || p == 2.0 || std::isinf(p);
  for (std::size_t k = 0; k < t.fibers(); ++k) {
    const Matrix& a = t.fiber(k);
    const auto w = m.weights(k);
    if (closed_form) {
      out.push_back(opnorm_exact(a, w, p));
    } else if (all_nonnegative(a)) {
      auto r = opnorm_boyd(a, w, p, opts.tol, opts.max_iter);
      if (!r.converged)
        throw Error(Errc::NoConvergence, "Boyd iteration did not converge on fiber " + std::to_string(k), k);
      out.push_back(std::move(r));
    } else {
      out.push_back(opnorm_oracle(a, w, p, opts.oracle_samples, opts.oracle_seed));
    }
  }
  return out;
}

L0Scalar l0_opnorm(const FiberedOperator& t, const VectorMeasure& m, double p, const NormOptions& opts) {
  const auto detailed = l0_opnorm_detailed(t, m, p, opts);
  L0Scalar out = L0Scalar::constant(detailed.size(), 0.0);
  for (std::size_t k = 0; k < detailed.size(); ++k) out[k] = detailed[k].value;
  return out;
}

bool is_contraction(const FiberedOperator& t, const VectorMeasure& m, double p, double slack) {
  return leq(l0_opnorm(t, m, p), L0Scalar::ones(t.fibers()), slack);
}

}  // namespace bklat
