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
#include "bklattice/verify.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>

#include "bklattice/io.hpp"
#include "bklattice/norms.hpp"
#include "bklattice/parallel.hpp"
#include "bklattice/rng.hpp"
#include "bklattice/zerotwo.hpp"

namespace bklat::verify {

using nlohmann::json;

namespace {

const std::vector<double> kPs = {1.0, 1.5, 2.0, 3.0, kInfP};

// A check body returns nullopt on success or a counterexample.
using Body = std::function<std::optional<json>(std::uint64_t seed)>;

struct Check {
  const char* name;
  const char* statement;
  Body body;
};

json p_json(double p) { return std::isinf(p) ? json("inf") : json(p); }
json mat_json(const Matrix& m) { return m.to_rows(); }
json op_json(const FiberedOperator& t) {
  json out = json::array();
  for (const auto& a : t.matrices()) out.push_back(mat_json(a));
  return out;
}

Matrix random_matrix(Rng& rng, std::size_t r, std::size_t c, double lo, double hi) {
  Matrix m(r, c);
  for (double& v : m.data()) v = rng.uniform(lo, hi);
  return m;
}

Section random_section(Rng& rng, std::size_t k, std::size_t n, double lo = -1.0, double hi = 1.0) {
  return Section(random_matrix(rng, k, n, lo, hi));
}

FiberedOperator random_operator(Rng& rng, std::size_t k, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::vector<Matrix> fibers;
  for (std::size_t r = 0; r < k; ++r) fibers.push_back(random_matrix(rng, n, n, lo, hi));
  return FiberedOperator(std::move(fibers));
}

Model random_model(Rng& rng, std::size_t k, std::size_t n, bool normalized = false) {
  std::vector<double> w(k);
  for (double& v : w) v = rng.uniform(0.5, 2.0);
  Matrix m = random_matrix(rng, k, n, 0.1, 2.0);
  if (normalized) {
    for (std::size_t r = 0; r < k; ++r) {
      double s = 0.0;
      for (double v : m.row(r)) s += v;
      for (double& v : m.row(r)) v /= s;
    }
  }
  return Model(BaseSpace(std::move(w)), BooleanAtoms(n), VectorMeasure(std::move(m)));
}

std::size_t dim(Rng& rng, std::size_t max) { return 1 + rng.index(0, max - 1); }

// ---------------------------------------------------------------- core

std::vector<Check> core_checks() {
  std::vector<Check> s;
  s.push_back({"norm-faithfulness", "|f|_p(w) = 0 <=> f(w) = 0", [](std::uint64_t seed) -> std::optional<json> {
                 for (std::uint64_t t = 0; t < 300; ++t) {
                   Rng rng = Rng::substream(seed, t);
                   const std::size_t k = dim(rng, 4), n = dim(rng, 6);
                   Section f = random_section(rng, k, n);
                   for (std::size_t r = 0; r < k; ++r)
                     if (rng.coin())
                       for (double& v : f.fiber(r)) v = 0.0;
                   const Model model = random_model(rng, k, n);
                   for (double p : kPs) {
                     const auto nrm = vec_norm(f, p, model.measure);
                     for (std::size_t r = 0; r < k; ++r) {
                       const bool zero = std::all_of(f.fiber(r).begin(), f.fiber(r).end(),
                                                     [](double v) { return v == 0.0; });
                       if ((nrm[r] == 0.0) != zero || nrm[r] < 0.0)
                         return json{{"section", mat_json(f.data())}, {"p", p_json(p)}, {"fiber", r}};
                     }
                   }
                 }
                 return std::nullopt;
               }});
  s.push_back({"norm-monotonicity", "|f| <= |g| => |f|_p <= |g|_p", [](std::uint64_t seed) -> std::optional<json> {
                 for (std::uint64_t t = 0; t < 300; ++t) {
                   Rng rng = Rng::substream(seed, t);
                   const std::size_t k = dim(rng, 4), n = dim(rng, 6);
                   const Section g = random_section(rng, k, n, -3.0, 3.0);
                   Section f = g;
                   for (double& v : f.data().data()) v *= rng.uniform(-1.0, 1.0);
                   const Model model = random_model(rng, k, n);
                   for (double p : kPs)
                     if (!leq(vec_norm(f, p, model.measure), vec_norm(g, p, model.measure), 1e-12))
                       return json{{"f", mat_json(f.data())}, {"g", mat_json(g.data())}, {"p", p_json(p)}};
                 }
                 return std::nullopt;
               }});
  s.push_back({"order-continuity", "f_n decreasing to 0 => |f_n|_p decreasing to 0",
               [](std::uint64_t seed) -> std::optional<json> {
                 for (std::uint64_t t = 0; t < 60; ++t) {
                   Rng rng = Rng::substream(seed, t);
                   const std::size_t k = dim(rng, 4), n = dim(rng, 6);
                   const Section f = abs(random_section(rng, k, n));
                   const Model model = random_model(rng, k, n);
                   for (double p : kPs) {
                     L0Scalar prev = vec_norm(f, p, model.measure);
                     for (double c = 1.0; c > 1e-12; c *= 0.5) {
                       const auto cur = vec_norm(meet(f, Section(Matrix(k, n, c))), p, model.measure);
                       if (!leq(cur, prev)) return json{{"f", mat_json(f.data())}, {"p", p_json(p)}, {"cap", c}};
                       prev = cur;
                     }
                     if (!leq(prev, L0Scalar::constant(k, 1e-10)))
                       return json{{"f", mat_json(f.data())}, {"p", p_json(p)}, {"limit", prev.values}};
                   }
                 }
                 return std::nullopt;
               }});
  s.push_back({"norm-homogeneity", "|alpha f|_p = |alpha| |f|_p for alpha in L0",
               [](std::uint64_t seed) -> std::optional<json> {
                 for (std::uint64_t t = 0; t < 300; ++t) {
                   Rng rng = Rng::substream(seed, t);
                   const std::size_t k = dim(rng, 4), n = dim(rng, 6);
                   const Section f = random_section(rng, k, n);
                   const Model model = random_model(rng, k, n);
                   L0Scalar alpha = L0Scalar::constant(k, 0.0);
                   for (auto& a : alpha.values) a = rng.uniform(-4.0, 4.0);
                   for (double p : kPs) {
                     const auto lhs = vec_norm(module_mul(alpha, f), p, model.measure);
                     const auto base = vec_norm(f, p, model.measure);
                     for (std::size_t r = 0; r < k; ++r) {
                       const double rhs = std::fabs(alpha[r]) * base[r];
                       if (std::fabs(lhs[r] - rhs) > 1e-12 * std::max(1.0, rhs))
                         return json{{"f", mat_json(f.data())}, {"alpha", alpha.values}, {"p", p_json(p)}};
                     }
                   }
                 }
                 return std::nullopt;
               }});
  s.push_back({"norm-nesting", "m(1) = 1, q <= p => |f|_q <= |f|_p", [](std::uint64_t seed) -> std::optional<json> {
                 for (std::uint64_t t = 0; t < 300; ++t) {
                   Rng rng = Rng::substream(seed, t);
                   const std::size_t k = dim(rng, 4), n = dim(rng, 6);
                   const Section f = random_section(rng, k, n, -5.0, 5.0);
                   const Model model = random_model(rng, k, n, true);
                   for (std::size_t a = 0; a < kPs.size(); ++a)
                     for (std::size_t b = a; b < kPs.size(); ++b)
                       if (!leq(vec_norm(f, kPs[a], model.measure), vec_norm(f, kPs[b], model.measure), 1e-12))
                         return json{{"f", mat_json(f.data())}, {"q", p_json(kPs[a])}, {"p", p_json(kPs[b])}};
                 }
                 return std::nullopt;
               }});
  s.push_back({"partition-decomposition", "sum over blocks B of chi_B f = f",
               [](std::uint64_t seed) -> std::optional<json> {
                 for (std::uint64_t t = 0; t < 100; ++t) {
                   Rng rng = Rng::substream(seed, t);
                   const std::size_t k = dim(rng, 4), n = dim(rng, 8);
                   const Section f = random_section(rng, k, n);
                   for (const auto& pi : random_refinement_chain(BooleanAtoms(n), rng)) {
                     Section acc = Section::zero(k, n);
                     for (const auto& b : pi.blocks()) acc = acc + indicator_mul(b, f);
                     if (!(acc == f)) return json{{"f", mat_json(f.data())}, {"blocks", pi.blocks()}};
                   }
                 }
                 return std::nullopt;
               }});
  s.push_back({"measure-additivity", "e ^ g = 0 => m(e v g) = m(e) + m(g)",
               [](std::uint64_t seed) -> std::optional<json> {
                 for (std::uint64_t t = 0; t < 200; ++t) {
                   Rng rng = Rng::substream(seed, t);
                   const std::size_t k = dim(rng, 4), n = dim(rng, 8);
                   const Model model = random_model(rng, k, n);
                   AtomSet e;
                   for (std::size_t j = 0; j < n; ++j)
                     if (rng.coin()) e.push_back(j);
                   const AtomSet g = complement(e, n);
                   const auto whole = model.measure.of(full_set(n));
                   const auto me = model.measure.of(e), mg = model.measure.of(g);
                   for (std::size_t r = 0; r < k; ++r)
                     if (std::fabs(whole[r] - me[r] - mg[r]) > 1e-12 * whole[r])
                       return json{{"measure", mat_json(model.measure.matrix())}, {"e", e}};
                 }
                 return std::nullopt;
               }});
  s.push_back({"refinement-chain", "pi_0 <= pi_1 <= ... <= atoms, one split per step",
               [](std::uint64_t seed) -> std::optional<json> {
                 for (std::uint64_t t = 0; t < 100; ++t) {
                   Rng rng = Rng::substream(seed, t);
                   const std::size_t n = dim(rng, 10);
                   for (const auto& chain : {refinement_chain(BooleanAtoms(n)),
                                             random_refinement_chain(BooleanAtoms(n), rng)}) {
                     bool ok = chain.size() == n && chain.front() == PartitionOfUnity::trivial(n) &&
                               chain.back().size() == n;
                     for (std::size_t i = 1; ok && i < chain.size(); ++i)
                       ok = chain[i - 1].is_refined_by(chain[i]) && chain[i].size() == chain[i - 1].size() + 1;
                     if (!ok) return json{{"n", n}};
                   }
                 }
                 return std::nullopt;
               }});
  return s;
}

// ----------------------------------------------------------- operators

std::vector<Check> operator_checks(const Options& opts) {
  std::vector<Check> s;
  s.push_back({"fiber-consistency", "(T f)(w) = T_w f(w)", [](std::uint64_t seed) -> std::optional<json> {
                 for (std::uint64_t t = 0; t < 300; ++t) {
                   Rng rng = Rng::substream(seed, t);
                   const std::size_t k = dim(rng, 4), n = dim(rng, 6);
                   const auto op = random_operator(rng, k, n);
                   const auto f = random_section(rng, k, n);
                   const auto global = apply(op, f);
                   for (std::size_t r = 0; r < k; ++r) {
                     const auto y = matvec(op.fiber(r), f.fiber(r));
                     if (!std::equal(y.begin(), y.end(), global.fiber(r).begin()))
                       return json{{"operator", op_json(op)}, {"section", mat_json(f.data())}, {"fiber", r}};
                   }
                   L0Scalar alpha = L0Scalar::constant(k, 0.0);
                   for (auto& a : alpha.values) a = rng.uniform(-3.0, 3.0);
                   if (max_abs_diff(apply(op, module_mul(alpha, f)).data(), module_mul(alpha, global).data()) > 1e-12)
                     return json{{"operator", op_json(op)}, {"section", mat_json(f.data())}, {"alpha", alpha.values}};
                 }
                 return std::nullopt;
               }});
  s.push_back({"modulus-dominance", "|T f| <= |T| |f|", [opts](std::uint64_t seed) -> std::optional<json> {
                 for (std::uint64_t t = 0; t < 500; ++t) {
                   Rng rng = Rng::substream(seed, t);
                   const std::size_t k = dim(rng, 4), n = dim(rng, 6);
                   const auto op = random_operator(rng, k, n);
                   const auto f = random_section(rng, k, n);
                   const auto mod = opts.modulus(op);
                   if (!leq(abs(apply(op, f)), apply(mod, abs(f)), 1e-12))
                     return json{{"operator", op_json(op)}, {"modulus", op_json(mod)}, {"section", mat_json(f.data())}};
                 }
                 return std::nullopt;
               }});
  s.push_back({"modulus-supremum", "|T| f = sup{|T g| : |g| <= f}, f >= 0",
               [opts](std::uint64_t seed) -> std::optional<json> {
                 for (std::uint64_t t = 0; t < 300; ++t) {
                   Rng rng = Rng::substream(seed, t);
                   const std::size_t n = dim(rng, 3);
                   const auto op = random_operator(rng, 1, n);
                   const auto f = abs(random_section(rng, 1, n));
                   const auto got = apply(opts.modulus(op), f);
                   std::vector<double> sup(n, 0.0);
                   for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
                     std::vector<double> g(n);
                     for (std::size_t j = 0; j < n; ++j) g[j] = (mask >> j) & 1 ? -f(0, j) : f(0, j);
                     const auto y = matvec(op.fiber(0), g);
                     for (std::size_t i = 0; i < n; ++i) sup[i] = std::max(sup[i], std::fabs(y[i]));
                   }
                   for (std::size_t i = 0; i < n; ++i)
                     if (std::fabs(got(0, i) - sup[i]) > 1e-12)
                       return json{{"operator", op_json(op)}, {"section", mat_json(f.data())}, {"row", i}};
                 }
                 return std::nullopt;
               }});
  s.push_back({"net-monotonicity", "pi <= pi' => T_pi f <= T_pi' f", [](std::uint64_t seed) -> std::optional<json> {
                 for (std::uint64_t t = 0; t < 200; ++t) {
                   Rng rng = Rng::substream(seed, t);
                   const std::size_t k = dim(rng, 3), n = dim(rng, 6);
                   const auto op = random_operator(rng, k, n);
                   const auto f = abs(random_section(rng, k, n));
                   const auto chain = random_refinement_chain(BooleanAtoms(n), rng);
                   for (std::size_t i = 1; i < chain.size(); ++i)
                     if (!leq(partition_step(op, chain[i - 1], f), partition_step(op, chain[i], f), 1e-12))
                       return json{{"operator", op_json(op)}, {"section", mat_json(f.data())},
                                   {"coarse", chain[i - 1].blocks()}, {"fine", chain[i].blocks()}};
                 }
                 return std::nullopt;
               }});
  s.push_back({"modulus-two-paths", "lim_pi T_pi = entrywise |T|, stable within N-1 steps",
               [opts](std::uint64_t seed) -> std::optional<json> {
                 for (std::uint64_t t = 0; t < 500; ++t) {
                   Rng rng = Rng::substream(seed, t);
                   const std::size_t k = dim(rng, 3), n = dim(rng, 6);
                   const auto op = random_operator(rng, k, n);
                   const auto report = modulus_net(op);
                   const auto direct = opts.modulus(op);
                   if (!(report.modulus == direct) || report.steps_to_stabilize > n - 1)
                     return json{{"operator", op_json(op)}, {"net", op_json(report.modulus)},
                                 {"direct", op_json(direct)}, {"steps", report.steps_to_stabilize}};
                   for (std::size_t i = 1; i < report.net_values.size(); ++i)
                     for (std::size_t q = 0; q < report.net_values[i].size(); ++q)
                       if (!leq(report.net_values[i - 1][q], report.net_values[i][q], 1e-12))
                         return json{{"operator", op_json(op)}, {"step", i}, {"probe", q}};
                 }
                 return std::nullopt;
               }});
  s.push_back({"modulus-fiber-norm", "|| |A|_w ||_p = || |A_w| ||_p for majorizable A",
               [opts](std::uint64_t seed) -> std::optional<json> {
                 for (std::uint64_t t = 0; t < 60; ++t) {
                   Rng rng = Rng::substream(seed, t);
                   const std::size_t k = dim(rng, 3), n = dim(rng, 5);
                   const Model model = random_model(rng, k, n);
                   const auto a = gen_contraction(model, GenMode::Signed, seed + t).op;
                   const auto global = modulus_net(a).modulus;
                   for (double p : kPs) {
                     const auto g = l0_opnorm(global, model.measure, p);
                     for (std::size_t r = 0; r < k; ++r) {
                       Matrix row(1, n);
                       std::copy(model.measure.weights(r).begin(), model.measure.weights(r).end(),
                                 row.row(0).begin());
                       const FiberedOperator fiber({opts.modulus(FiberedOperator({a.fiber(r)})).fiber(0)});
                       const double local = l0_opnorm(fiber, VectorMeasure(std::move(row)), p)[0];
                       if (std::fabs(g[r] - local) > 1e-12 * std::max(1.0, local))
                         return json{{"operator", op_json(a)}, {"p", p_json(p)}, {"fiber", r}};
                     }
                   }
                 }
                 return std::nullopt;
               }});
  s.push_back({"majorant-check", "|A f| <= S |f| for the generated envelope S",
               [](std::uint64_t seed) -> std::optional<json> {
                 for (std::uint64_t t = 0; t < 40; ++t) {
                   Rng rng = Rng::substream(seed, t);
                   const std::size_t k = dim(rng, 3), n = dim(rng, 6);
                   const Model model = random_model(rng, k, n);
                   const auto g = gen_contraction(model, GenMode::Signed, seed + t);
                   if (auto v = majorant_check(g.op, *g.majorant, 100, seed + t))
                     return json{{"operator", op_json(g.op)}, {"majorant", op_json(*g.majorant)},
                                 {"probe", mat_json(v->probe.data())}};
                 }
                 return std::nullopt;
               }});
  s.push_back({"generator-soundness", "T1 <= 1 and ||T||_p <= 1 for p in {1, 1.5, 2, 3, inf}",
               [](std::uint64_t seed) -> std::optional<json> {
                 for (std::uint64_t t = 0; t < 60; ++t) {
                   Rng rng = Rng::substream(seed, t);
                   const std::size_t k = dim(rng, 4), n = dim(rng, 8);
                   const Model model = random_model(rng, k, n);
                   for (GenMode mode : {GenMode::PositiveStrict, GenMode::Signed}) {
                     const auto g = gen_contraction(model, mode, seed + t);
                     if (!g.op.is_sub_unital()) return json{{"operator", op_json(g.op)}, {"failed", "T1 <= 1"}};
                     for (double p : kPs)
                       if (!is_contraction(g.op, model.measure, p, 1e-10))
                         return json{{"operator", op_json(g.op)}, {"p", p_json(p)},
                                     {"measure", mat_json(model.measure.matrix())}};
                   }
                 }
                 return std::nullopt;
               }});
  return s;
}

// --------------------------------------------------------------- norms

std::vector<double> random_weights(Rng& rng, std::size_t n) {
  std::vector<double> w(n);
  for (double& v : w) v = rng.uniform(0.1, 2.0);
  return w;
}

std::vector<Check> norm_checks(const Options& opts) {
  std::vector<Check> s;
  s.push_back({"oracle-soundness", "oracle <= exact and oracle <= Boyd (+1e-9)",
               [](std::uint64_t seed) -> std::optional<json> {
                 for (std::uint64_t t = 0; t < 200; ++t) {
                   Rng rng = Rng::substream(seed, t);
                   const std::size_t n = dim(rng, 6);
                   const auto w = random_weights(rng, n);
                   const Matrix a = random_matrix(rng, n, n, -1.0, 1.0);
                   for (double p : {1.0, 2.0, kInfP})
                     if (opnorm_oracle(a, w, p, 100, t).value > opnorm_exact(a, w, p).value + 1e-9)
                       return json{{"matrix", mat_json(a)}, {"weights", w}, {"p", p_json(p)}};
                   const Matrix pos = entrywise_abs(a);
                   const double p = rng.uniform(1.1, 4.0);
                   const auto b = opnorm_boyd(pos, w, p);
                   if (!b.converged || opnorm_oracle(pos, w, p, 100, t).value > b.value + 1e-9)
                     return json{{"matrix", mat_json(pos)}, {"weights", w}, {"p", p}};
                 }
                 return std::nullopt;
               }});
  s.push_back({"boyd-exact-agreement", "Boyd = exact at p = 2 (1e-8 relative)",
               [](std::uint64_t seed) -> std::optional<json> {
                 for (std::uint64_t t = 0; t < 1000; ++t) {
                   Rng rng = Rng::substream(seed, t);
                   const std::size_t n = dim(rng, 6);
                   const auto w = random_weights(rng, n);
                   const Matrix a = random_matrix(rng, n, n, 0.0, 1.0);
                   const double e = opnorm_exact(a, w, 2.0).value;
                   const auto b = opnorm_boyd(a, w, 2.0, 1e-12);
                   if (!b.converged || std::fabs(b.value - e) > 1e-8 * e)
                     return json{{"matrix", mat_json(a)}, {"weights", w}, {"exact", e}, {"boyd", b.value}};
                 }
                 return std::nullopt;
               }});
  s.push_back({"submultiplicativity", "||T S|| <= ||T|| ||S||", [](std::uint64_t seed) -> std::optional<json> {
                 for (std::uint64_t t = 0; t < 100; ++t) {
                   Rng rng = Rng::substream(seed, t);
                   const std::size_t k = dim(rng, 3), n = dim(rng, 5);
                   const Model model = random_model(rng, k, n);
                   const auto a = random_operator(rng, k, n, 0.0, 1.0);
                   const auto b = random_operator(rng, k, n, 0.0, 1.0);
                   for (double p : kPs) {
                     const auto ab = l0_opnorm(compose(a, b), model.measure, p);
                     const auto na = l0_opnorm(a, model.measure, p), nb = l0_opnorm(b, model.measure, p);
                     for (std::size_t r = 0; r < k; ++r)
                       if (ab[r] > na[r] * nb[r] + 1e-10 * std::max(1.0, na[r] * nb[r]))
                         return json{{"t", op_json(a)}, {"s", op_json(b)}, {"p", p_json(p)}};
                   }
                 }
                 return std::nullopt;
               }});
  s.push_back({"modulus-norm-endpoints", "||T||_1 = || |T| ||_1 and ||T||_inf = || |T| ||_inf",
               [opts](std::uint64_t seed) -> std::optional<json> {
                 for (std::uint64_t t = 0; t < 500; ++t) {
                   Rng rng = Rng::substream(seed, t);
                   const std::size_t k = dim(rng, 3), n = dim(rng, 6);
                   const Model model = random_model(rng, k, n);
                   const auto op = random_operator(rng, k, n);
                   const auto mod = opts.modulus(op);
                   for (double p : {1.0, kInfP}) {
                     const auto a = l0_opnorm(op, model.measure, p), b = l0_opnorm(mod, model.measure, p);
                     for (std::size_t r = 0; r < k; ++r)
                       if (std::fabs(a[r] - b[r]) > 1e-10)
                         return json{{"operator", op_json(op)}, {"p", p_json(p)}, {"fiber", r}};
                   }
                 }
                 return std::nullopt;
               }});
  s.push_back({"modulus-norm-gap-p2", "||A||_2 < || |A| ||_2 for A = [[0.7,0.7],[0.7,-0.7]]",
               [](std::uint64_t) -> std::optional<json> {
                 const Matrix a{{0.7, 0.7}, {0.7, -0.7}};
                 const std::vector<double> w{1.0, 1.0};
                 const double signed_norm = opnorm_exact(a, w, 2.0).value;
                 const double mod_norm = opnorm_exact(entrywise_abs(a), w, 2.0).value;
                 if (std::fabs(signed_norm - 0.7 * std::sqrt(2.0)) > 1e-12 || std::fabs(mod_norm - 1.4) > 1e-12 ||
                     !(mod_norm - signed_norm > 0.4))
                   return json{{"signed", signed_norm}, {"modulus", mod_norm}};
                 return std::nullopt;
               }});
  s.push_back({"majorant-norm-bound", "|A f| <= S|f| => || |A| || <= ||S||",
               [opts](std::uint64_t seed) -> std::optional<json> {
                 for (std::uint64_t t = 0; t < 60; ++t) {
                   Rng rng = Rng::substream(seed, t);
                   const std::size_t k = dim(rng, 3), n = dim(rng, 6);
                   const Model model = random_model(rng, k, n);
                   const auto g = gen_contraction(model, GenMode::Signed, seed + t);
                   const auto loose = *g.majorant + random_operator(rng, k, n, 0.0, 0.2);
                   for (const auto& s_op : {*g.majorant, loose}) {
                     for (double p : kPs) {
                       const auto lhs = l0_opnorm(opts.modulus(g.op), model.measure, p);
                       const auto rhs = l0_opnorm(s_op, model.measure, p);
                       if (!leq(lhs, rhs, 1e-10))
                         return json{{"a", op_json(g.op)}, {"s", op_json(s_op)}, {"p", p_json(p)}};
                     }
                   }
                 }
                 return std::nullopt;
               }});
  s.push_back({"weighted-reduction", "||A||_{p,w} = ||D^(1/p) A D^(-1/p)||_p", [](std::uint64_t seed) -> std::optional<json> {
                 for (std::uint64_t t = 0; t < 40; ++t) {
                   Rng rng = Rng::substream(seed, t);
                   const std::size_t n = dim(rng, 5);
                   const auto w = random_weights(rng, n);
                   const Matrix a = random_matrix(rng, n, n, 0.0, 1.0);
                   const double p = rng.uniform(1.1, 4.0);
                   const double direct = opnorm_oracle(a, w, p, 500, t).value;
                   const double reduced =
                       opnorm_oracle(weighted_similarity(a, w, p), std::vector<double>(n, 1.0), p, 500, t).value;
                   if (std::fabs(direct - reduced) > 1e-8 * std::max(1.0, direct))
                     return json{{"matrix", mat_json(a)}, {"weights", w}, {"p", p}, {"direct", direct},
                                 {"reduced", reduced}};
                 }
                 return std::nullopt;
               }});
  s.push_back({"certificates", "||A x||/||x|| reproduces the reported norm", [](std::uint64_t seed) -> std::optional<json> {
                 for (std::uint64_t t = 0; t < 200; ++t) {
                   Rng rng = Rng::substream(seed, t);
                   const std::size_t n = dim(rng, 6);
                   const auto w = random_weights(rng, n);
                   const Matrix a = random_matrix(rng, n, n, -1.0, 1.0);
                   std::vector<NormResult> results;
                   for (double p : {1.0, 2.0, kInfP}) results.push_back(opnorm_exact(a, w, p));
                   const double p = rng.uniform(1.1, 4.0);
                   results.push_back(opnorm_boyd(entrywise_abs(a), w, p));
                   const std::vector<double> ps{1.0, 2.0, kInfP, p};
                   for (std::size_t i = 0; i < results.size(); ++i) {
                     const Matrix& m = i == 3 ? entrywise_abs(a) : a;
                     const double r = norm_ratio(m, w, ps[i], results[i].certificate);
                     if (std::fabs(r - results[i].value) > 1e-10 * std::max(1.0, results[i].value))
                       return json{{"matrix", mat_json(m)}, {"weights", w}, {"p", p_json(ps[i])}};
                   }
                 }
                 return std::nullopt;
               }});
  return s;
}

// ------------------------------------------------------------- zerotwo

std::optional<json> trace_shape_violation(const DichotomyTrace& trace) {
  for (std::size_t n = 0; n < trace.d.size(); ++n) {
    for (std::size_t r = 0; r < trace.fibers(); ++r) {
      const double v = trace.d[n][r];
      if (v < 0.0 || v > 2.0 + 1e-10 || (n > 0 && v > trace.d[n - 1][r] + 1e-10))
        return json{{"n", n}, {"fiber", r}, {"d", v}};
    }
  }
  return std::nullopt;
}

std::vector<Check> zerotwo_checks() {
  std::vector<Check> s;
  s.push_back({"zero-two-decay", "d_m < 2 for some m => d_n -> 0, with 0 <= d_(n+1) <= d_n <= 2",
               [](std::uint64_t seed) -> std::optional<json> {
                 const std::vector<double> ps{1.0, 1.5, 2.0, 3.0};
                 for (std::uint64_t t = 0; t < 40; ++t) {
                   Rng rng = Rng::substream(seed, t);
                   const std::size_t k = dim(rng, 4), n = dim(rng, 8);
                   const Model model = random_model(rng, k, n);
                   const auto op = gen_contraction(model, GenMode::PositiveStrict, seed + t).op;
                   const double p = ps[t % ps.size()];
                   const auto trace = run_dichotomy(op, model.measure, p, 500);
                   if (auto v = trace_shape_violation(trace)) {
                     (*v)["operator"] = op_json(op);
                     return v;
                   }
                   if (trace.hypothesis_m)
                     for (std::size_t r = 0; r < k; ++r)
                       if (!(trace.d.back()[r] < kDefaultZeroTol))
                         return json{{"operator", op_json(op)}, {"p", p}, {"fiber", r}, {"final", trace.d.back()[r]}};
                 }
                 return std::nullopt;
               }});
  s.push_back({"zero-two-stuck", "cyclic permutations: d_n = 2 for all n", [](std::uint64_t) -> std::optional<json> {
                 for (std::size_t period = 2; period <= 6; ++period) {
                   Matrix cyc(period, period);
                   for (std::size_t i = 0; i < period; ++i) cyc(i, (i + 1) % period) = 1.0;
                   const auto op = FiberedOperator::constant(2, cyc);
                   for (double p : {1.0, 1.5, 2.0, 3.0, kInfP}) {
                     const auto trace = run_dichotomy(op, VectorMeasure::uniform(2, period), p, 50);
                     for (std::size_t n = 0; n < trace.d.size(); ++n)
                       for (double v : trace.d[n])
                         if (std::fabs(v - 2.0) > 1e-12) return json{{"period", period}, {"p", p_json(p)}, {"n", n}};
                   }
                 }
                 return std::nullopt;
               }});
  s.push_back({"closed-form-trace", "T = [[0.6,0.4],[0.4,0.6]], p = 1: d_n = 0.8 * 0.2^n",
               [](std::uint64_t) -> std::optional<json> {
                 const auto op = FiberedOperator({Matrix{{0.6, 0.4}, {0.4, 0.6}}});
                 const auto trace = run_dichotomy(op, VectorMeasure::uniform(1, 2), 1.0, 15);
                 for (unsigned n = 0; n <= 15; ++n)
                   if (std::fabs(trace.d[n][0] - 0.8 * std::pow(0.2, n)) > 1e-10)
                     return json{{"n", n}, {"d", trace.d[n][0]}};
                 return std::nullopt;
               }});
  s.push_back({"per-atom-convergence", "positive fiber -> 0 while permutation fiber stays at 2",
               [](std::uint64_t seed) -> std::optional<json> {
                 for (std::uint64_t t = 0; t < 5; ++t) {
                   const std::size_t n = 2 + t;
                   const Model model = Model::uniform(2, n);
                   const auto positive = gen_contraction(model, GenMode::PositiveStrict, seed + t).op;
                   const auto perm = gen_contraction(model, GenMode::Permutation, seed + t).op;
                   const FiberedOperator mixed({positive.fiber(0), perm.fiber(1)});
                   const auto trace = run_dichotomy(mixed, model.measure, 1.0, 300);
                   const auto v = classify(trace);
                   if (v[0].verdict != Verdict::ConvergesToZero || v[1].verdict != Verdict::StuckAtTwo ||
                       trace.hypothesis_m || check_hypothesis(trace, 0) != std::vector<bool>{true, false})
                     return json{{"operator", op_json(mixed)}};
                 }
                 return std::nullopt;
               }});
  s.push_back({"fiber-global-equality", "|| |T_w - S_w| ||_p = || |T - S| ||(w)",
               [](std::uint64_t seed) -> std::optional<json> {
                 const std::vector<double> ps{1.0, 2.0, kInfP, 1.5, 3.0};
                 for (std::uint64_t t = 0; t < 100; ++t) {
                   Rng rng = Rng::substream(seed, t);
                   const std::size_t k = dim(rng, 3), n = dim(rng, 5);
                   const Model model = random_model(rng, k, n);
                   const auto a = gen_contraction(model, GenMode::PositiveStrict, 2 * (seed + t)).op;
                   const auto b = gen_contraction(model, GenMode::PositiveStrict, 2 * (seed + t) + 1).op;
                   const double p = ps[t % ps.size()];
                   const auto rep = compare_fiber_global(a, b, model.measure, p);
                   if (!(rep.max_rel_discrepancy < 1e-10) || !rep.fiber_dominates)
                     return json{{"t", op_json(a)}, {"s", op_json(b)}, {"p", p_json(p)},
                                 {"global", rep.global_path}, {"fiber", rep.fiber_path}};
                 }
                 return std::nullopt;
               }});
  s.push_back({"single-fiber-classical", "K = 1: d_m < 2 => d_n -> 0 for p in {1, 1.5, 2, 3}",
               [](std::uint64_t seed) -> std::optional<json> {
                 for (std::uint64_t t = 0; t < 10; ++t) {
                   Rng rng = Rng::substream(seed, t);
                   const Model model = random_model(rng, 1, 2 + rng.index(0, 5));
                   const auto op = gen_contraction(model, GenMode::PositiveStrict, seed + t).op;
                   for (double p : {1.0, 1.5, 2.0, 3.0}) {
                     const auto trace = run_dichotomy(op, model.measure, p, 500);
                     if (!trace.hypothesis_m || classify(trace)[0].verdict != Verdict::ConvergesToZero)
                       return json{{"operator", op_json(op)}, {"p", p}};
                   }
                 }
                 return std::nullopt;
               }});
  return s;
}

// ------------------------------------------------------------------ io

std::vector<Check> io_checks() {
  std::vector<Check> s;
  s.push_back({"round-trip", "load(store(x)) = x for models, operators, traces",
               [](std::uint64_t seed) -> std::optional<json> {
                 for (std::uint64_t t = 0; t < 20; ++t) {
                   Rng rng = Rng::substream(seed, t);
                   const std::size_t k = dim(rng, 4), n = dim(rng, 6);
                   const Model model = random_model(rng, k, n);
                   const auto op = gen_contraction(model, GenMode::Signed, seed + t).op;
                   const auto mj = json::parse(io::dump(io::model_to_json(model)));
                   const auto oj = json::parse(io::dump(io::operator_to_json(op, model)));
                   if (!(io::model_from_json(mj) == model) || !(io::operator_from_json(oj).op == op))
                     return json{{"operator", op_json(op)}};
                   DichotomyTrace trace;
                   for (int i = 0; i < 10; ++i) trace.d.push_back({rng.uniform(), rng.uniform() * 1e-250});
                   if (io::trace_from_csv(io::trace_to_csv(trace)) != trace.d) return json{{"trace", trace.d}};
                 }
                 return std::nullopt;
               }});
  s.push_back({"determinism", "same seed and inputs => identical bytes", [](std::uint64_t seed) -> std::optional<json> {
                 auto render = [seed] {
                   Rng rng(seed);
                   const Model model = random_model(rng, 3, 4);
                   const auto op = gen_contraction(model, GenMode::PositiveStrict, seed).op;
                   const auto trace = run_dichotomy(op, model.measure, 1.5, 40);
                   return io::dump(io::operator_to_json(op, model)) + io::trace_to_csv(trace) +
                          io::dump(io::verdicts_to_json(classify(trace)));
                 };
                 if (render() != render()) return json{{"seed", seed}};
                 return std::nullopt;
               }});
  return s;
}

std::vector<Check> checks_for(const std::string& suite, const Options& opts) {
  if (suite == "core") return core_checks();
  if (suite == "operators") return operator_checks(opts);
  if (suite == "norms") return norm_checks(opts);
  if (suite == "zerotwo") return zerotwo_checks();
  if (suite == "io") return io_checks();
  throw Error(Errc::InvalidArgument, "unknown suite '" + suite + "'");
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"core", "operators", "norms", "zerotwo", "io"};
  return names;
}

std::vector<CheckResult> run(const std::string& suite, const Options& opts) {
  std::vector<std::string> suites;
  if (suite == "all")
    suites = suite_names();
  else
    suites.push_back(suite);

  std::vector<std::pair<std::string, Check>> checks;
  for (const auto& name : suites)
    for (auto& check : checks_for(name, opts)) checks.emplace_back(name, std::move(check));

  // Checks are independent and individually seeded, so order of execution
  // does not affect the results.
  std::vector<CheckResult> results(checks.size());
  parallel_for(checks.size(), [&](std::size_t i) {
    const auto& [name, check] = checks[i];
    CheckResult& r = results[i];
    r.suite = name;
    r.name = check.name;
    r.statement = check.statement;
    try {
      if (auto cex = check.body(opts.seed)) {
        r.passed = false;
        r.counterexample = std::move(*cex);
        r.detail = "counterexample found";
      }
    } catch (const Error& e) {
      r.passed = false;
      r.detail = e.what();
      r.counterexample = json{{"error", e.what()}};
    }
  });
  return results;
}

}  // namespace bklat::verify
