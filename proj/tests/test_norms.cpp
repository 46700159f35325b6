#include <cmath>

#include "bklattice/norms.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bklat;
using bklat::testing::kPs;
using bklat::testing::random_matrix;

namespace {

const Matrix kA{{0.2, 0.6}, {0.3, 0.1}};
const std::vector<double> kW{1.0, 2.0};

std::vector<double> random_weights(Rng& rng, std::size_t n) {
  std::vector<double> w(n);
  for (double& v : w) v = rng.uniform(0.1, 2.0);
  return w;
}

double rel(double a, double b) { return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-300}); }

}  // namespace

TEST_CASE("opnorm_exact examples") {
  Rng rng(31);
  for (std::size_t n : {1u, 3u, 5u}) {
    const auto w = random_weights(rng, n);
    for (double p : {1.0, 2.0, kInfP}) CHECK(opnorm_exact(Matrix::identity(n), w, p).value == doctest::Approx(1.0).epsilon(1e-14));
  }
  // Weighted column sums (0.2 + 2*0.3)/1 and (0.6 + 2*0.1)/2.
  const auto r1 = opnorm_exact(kA, kW, 1.0);
  CHECK(r1.value == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(r1.method == NormMethod::ExactP1);
  CHECK(r1.certificate == std::vector<double>{1.0, 0.0});
  // Row sums 0.8 and 0.4.
  CHECK(opnorm_exact(kA, kW, kInfP).value == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(opnorm_exact(Matrix{{-3.0}}, std::vector<double>{7.0}, 2.0).value == doctest::Approx(3.0));
  CHECK(opnorm_exact(Matrix(3, 3), std::vector<double>{1, 2, 3}, 1.0).value == 0.0);

  CHECK_THROWS_AS(opnorm_exact(kA, kW, 1.5), Error);
  try {
    opnorm_exact(kA, std::vector<double>{1.0, 0.0}, 1.0);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonPositiveWeight);
  }
}

TEST_CASE("opnorm_boyd examples") {
  Rng rng(32);
  const auto w = random_weights(rng, 2);
  CHECK(opnorm_boyd(Matrix{{0.3, 0.0}, {0.0, 0.9}}, w, 3.0).value == doctest::Approx(0.9).epsilon(1e-12));
  const Matrix sym{{0.6, 0.4}, {0.4, 0.6}};
  const auto r = opnorm_boyd(sym, std::vector<double>{1, 1}, 2.0);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.value == doctest::Approx(opnorm_exact(sym, std::vector<double>{1, 1}, 2.0).value).epsilon(1e-12));
  CHECK(opnorm_boyd(Matrix(2, 2), w, 2.5).value == 0.0);

  // Random positive substochastic 4x4 at p = 1.5 against the oracle.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng g(100 + seed);
    Matrix a = random_matrix(g, 4, 4, 0.0, 1.0);
    for (std::size_t i = 0; i < 4; ++i) {
      double s = 0.0;
      for (double v : a.row(i)) s += v;
      for (double& v : a.row(i)) v /= s * 1.05;
    }
    const auto ww = random_weights(g, 4);
    const auto boyd = opnorm_boyd(a, ww, 1.5);
    const auto oracle = opnorm_oracle(a, ww, 1.5, 1000, seed);
    CHECK(boyd.converged);
    CHECK(rel(boyd.value, oracle.value) < 1e-6);
  }

  CHECK_THROWS_AS(opnorm_boyd(sym, std::vector<double>{1, 1}, 1.0), Error);
  CHECK_THROWS_AS(opnorm_boyd(sym, std::vector<double>{1, 1}, kInfP), Error);
  CHECK_THROWS_AS(opnorm_boyd(sym, std::vector<double>{1, 1}, 2.0, 0.0), Error);
}

TEST_CASE("opnorm_boyd estimates never decrease") {
  Rng rng(33);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.index(0, 4);
    const Matrix a = random_matrix(rng, n, n, 0.0, 1.0);
    const auto w = random_weights(rng, n);
    const double p = rng.uniform(1.1, 4.0);
    double prev = 0.0;
    for (int it = 1; it <= 12; ++it) {
      const double v = opnorm_boyd(a, w, p, 1e-300, it).value;
      CHECK(v >= prev - 1e-14 * prev);
      prev = v;
    }
  }
}

TEST_CASE("opnorm_oracle examples") {
  const std::vector<double> w{1, 2, 3};
  CHECK(opnorm_oracle(Matrix(3, 3), w, 1.5, 10, 1).value == 0.0);
  CHECK(opnorm_oracle(Matrix::identity(3), w, 2.5, 10, 1).value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::fabs(opnorm_oracle(kA, kW, 1.0, 1000, 1).value - 0.8) < 1e-9);
  CHECK_THROWS_AS(opnorm_oracle(kA, kW, 1.0, 0, 1), Error);
}

TEST_CASE("l0_opnorm examples") {
  Rng rng(34);
  const auto m = bklat::testing::random_measure(rng, 3, 4);
  for (double p : kPs)
    for (double v : l0_opnorm(FiberedOperator::identity(3, 4), m, p).values) CHECK(v == doctest::Approx(1.0));
  const FiberedOperator one_by_one({Matrix{{0.5}}, Matrix{{0.25}}});
  for (double p : kPs) {
    const auto v = l0_opnorm(one_by_one, VectorMeasure(Matrix{{3.0}, {0.2}}), p);
    CHECK(v[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(v[1] == doctest::Approx(0.25).epsilon(1e-14));
  }
  const auto swap = FiberedOperator::constant(2, Matrix{{0, 1}, {1, 0}});
  CHECK(l0_opnorm(swap, VectorMeasure::uniform(2, 2), 1.0) == L0Scalar({1.0, 1.0}));
  CHECK(is_contraction(swap, VectorMeasure::uniform(2, 2), 1.0));
  CHECK_FALSE(is_contraction(2.0 * swap, VectorMeasure::uniform(2, 2), 1.0));
  CHECK_THROWS_AS(l0_opnorm(swap, VectorMeasure::uniform(2, 3), 1.0), Error);

  const auto detailed = l0_opnorm_detailed(FiberedOperator({Matrix{{0.5, -0.1}, {0.2, 0.3}}}),
                                           VectorMeasure::uniform(1, 2), 1.5);
  CHECK(detailed[0].method == NormMethod::Oracle);
  const auto nonneg = l0_opnorm_detailed(FiberedOperator({Matrix{{0.5, 0.1}, {0.2, 0.3}}}),
                                         VectorMeasure::uniform(1, 2), 1.5);
  CHECK(nonneg[0].method == NormMethod::Boyd);
}

TEST_CASE("property: certificates reproduce their values") {
  Rng rng(35);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.index(0, 5);
    const auto w = random_weights(rng, n);
    const Matrix signed_a = random_matrix(rng, n, n, -1.0, 1.0);
    const Matrix pos = entrywise_abs(signed_a);
    for (double p : {1.0, 2.0, kInfP}) {
      const auto r = opnorm_exact(signed_a, w, p);
      CHECK(std::fabs(norm_ratio(signed_a, w, p, r.certificate) - r.value) <= 1e-10 * std::max(1.0, r.value));
    }
    const double p = rng.uniform(1.1, 4.0);
    const auto b = opnorm_boyd(pos, w, p);
    CHECK(std::fabs(norm_ratio(pos, w, p, b.certificate) - b.value) <= 1e-10 * std::max(1.0, b.value));
    const auto o = opnorm_oracle(signed_a, w, p, 50, 1);
    CHECK(std::fabs(norm_ratio(signed_a, w, p, o.certificate) - o.value) <= 1e-10 * std::max(1.0, o.value));
  }
}

TEST_CASE("property: oracle soundness and Boyd/exact agreement") {
  Rng rng(36);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.index(0, 5);
    const auto w = random_weights(rng, n);
    const Matrix a = random_matrix(rng, n, n, -1.0, 1.0);
    for (double p : {1.0, 2.0, kInfP})
      CHECK(opnorm_oracle(a, w, p, 200, trial).value <= opnorm_exact(a, w, p).value + 1e-9);
    const Matrix pos = entrywise_abs(a);
    const double p = rng.uniform(1.1, 4.0);
    const auto b = opnorm_boyd(pos, w, p);
    REQUIRE(b.converged);
    CHECK(opnorm_oracle(pos, w, p, 200, trial).value <= b.value + 1e-9);
    CHECK(b.value <= interpolation_bound(pos, w, p) * (1 + 1e-12));
    const auto b2 = opnorm_boyd(pos, w, 2.0);
    CHECK(rel(b2.value, opnorm_exact(pos, w, 2.0).value) < 1e-8);
  }
}

TEST_CASE("property: submultiplicativity") {
  Rng rng(37);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 1 + rng.index(0, 2), n = 1 + rng.index(0, 4);
    const auto m = bklat::testing::random_measure(rng, k, n);
    const auto t = bklat::testing::random_operator(rng, k, n, 0.0, 1.0);
    const auto s = bklat::testing::random_operator(rng, k, n, 0.0, 1.0);
    for (double p : kPs) {
      const auto ts = l0_opnorm(compose(t, s), m, p);
      const auto nt = l0_opnorm(t, m, p);
      const auto ns = l0_opnorm(s, m, p);
      for (std::size_t r = 0; r < k; ++r) CHECK(ts[r] <= nt[r] * ns[r] * (1 + 1e-10) + 1e-10);
    }
  }
}

TEST_CASE("property: modulus norm equality at p = 1 and p = inf only") {
  Rng rng(38);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = 1 + rng.index(0, 2), n = 1 + rng.index(0, 5);
    const auto m = bklat::testing::random_measure(rng, k, n);
    const auto t = bklat::testing::random_operator(rng, k, n);
    const auto mod = modulus_net(t).modulus;
    for (double p : {1.0, kInfP}) {
      const auto a = l0_opnorm(t, m, p);
      const auto b = l0_opnorm(mod, m, p);
      for (std::size_t r = 0; r < k; ++r) CHECK(std::fabs(a[r] - b[r]) <= 1e-10);
      // Independent lower bound on ||T|| from the sampling oracle.
      for (std::size_t r = 0; r < k; ++r)
        CHECK(opnorm_oracle(t.fiber(r), m.weights(r), p, 100, trial).value <= a[r] + 1e-9);
    }
  }
  const Matrix a{{0.7, 0.7}, {0.7, -0.7}};
  const std::vector<double> w{1, 1};
  const double signed_norm = opnorm_exact(a, w, 2.0).value;
  const double mod_norm = opnorm_exact(entrywise_abs(a), w, 2.0).value;
  CHECK(signed_norm == doctest::Approx(0.7 * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(mod_norm == doctest::Approx(1.4).epsilon(1e-14));
  CHECK(mod_norm - signed_norm > 0.4);
}

TEST_CASE("property: a majorant bounds the modulus norm") {
  Rng rng(39);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t k = 1 + rng.index(0, 2), n = 1 + rng.index(0, 5);
    const Model model = bklat::testing::random_model(rng, k, n);
    const auto g = gen_contraction(model, GenMode::Signed, static_cast<std::uint64_t>(trial));
    const auto bigger = *g.majorant + bklat::testing::random_operator(rng, k, n, 0.0, 0.2);
    for (const auto& s : {*g.majorant, bigger}) {
      for (double p : kPs) {
        const auto lhs = l0_opnorm(modulus_direct(g.op), model.measure, p);
        const auto rhs = l0_opnorm(s, model.measure, p);
        CHECK(leq(lhs, rhs, 1e-10));
      }
    }
  }
}

TEST_CASE("property: weighted reduction is exact") {
  Rng rng(40);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng.index(0, 4);
    const auto w = random_weights(rng, n);
    const Matrix a = random_matrix(rng, n, n, 0.0, 1.0);
    const double p = rng.uniform(1.1, 4.0);
    const std::vector<double> ones(n, 1.0);
    const double direct = opnorm_oracle(a, w, p, 500, trial).value;
    const double reduced = opnorm_oracle(weighted_similarity(a, w, p), ones, p, 500, trial).value;
    CHECK(std::fabs(direct - reduced) <= 1e-8 * std::max(1.0, direct));
    // Same vector, same ratio under the change of variables y = D^(1/p) x.
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.uniform(-1.0, 1.0);
      y[i] = std::pow(w[i], 1.0 / p) * x[i];
    }
    CHECK(rel(norm_ratio(a, w, p, x), norm_ratio(weighted_similarity(a, w, p), ones, p, y)) < 1e-12);
  }
}
