// Shared generators for the property tests.
#ifndef BKLATTICE_TESTS_SUPPORT_HPP
#define BKLATTICE_TESTS_SUPPORT_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bklattice/core_lattice.hpp"
#include "bklattice/operators.hpp"
#include "bklattice/rng.hpp"

namespace bklat::testing {

inline const std::vector<double> kPs = {1.0, 1.5, 2.0, 3.0, kInfP};

inline Matrix random_matrix(Rng& rng, std::size_t r, std::size_t c, double lo, double hi) {
  Matrix m(r, c);
  for (double& v : m.data()) v = rng.uniform(lo, hi);
  return m;
}

inline VectorMeasure random_measure(Rng& rng, std::size_t k, std::size_t n, bool normalized = false) {
  Matrix m = random_matrix(rng, k, n, 0.1, 2.0);
  if (normalized) {
    for (std::size_t r = 0; r < k; ++r) {
      double s = 0.0;
      for (double v : m.row(r)) s += v;
      for (double& v : m.row(r)) v /= s;
    }
  }
  return VectorMeasure(std::move(m));
}

inline Model random_model(Rng& rng, std::size_t k, std::size_t n, bool normalized = false) {
  std::vector<double> w(k);
  for (double& v : w) v = rng.uniform(0.5, 2.0);
  return Model(BaseSpace(std::move(w)), BooleanAtoms(n), random_measure(rng, k, n, normalized));
}

inline Section random_section(Rng& rng, std::size_t k, std::size_t n, double lo = -1.0, double hi = 1.0) {
  return Section(random_matrix(rng, k, n, lo, hi));
}

inline FiberedOperator random_operator(Rng& rng, std::size_t k, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::vector<Matrix> fibers;
  for (std::size_t r = 0; r < k; ++r) fibers.push_back(random_matrix(rng, n, n, lo, hi));
  return FiberedOperator(std::move(fibers));
}

}  // namespace bklat::testing

#endif  // BKLATTICE_TESTS_SUPPORT_HPP
