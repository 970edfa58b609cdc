#ifndef BURES_TESTS_SUPPORT_HPP
#define BURES_TESTS_SUPPORT_HPP

#include <doctest.h>

#include "bures/operator_core.hpp"
#include "gen.hpp"

namespace testsup {

inline bures::Matrix identity(int n) { return bures::Matrix::Identity(n, n); }

inline bures::DensityMatrix diag_state(std::initializer_list<double> diag) {
  const int n = static_cast<int>(diag.size());
  bures::Matrix m = bures::Matrix::Zero(n, n);
  int k = 0;
  for (double d : diag) m(k, k) = d, ++k;
  return bures::validate_density(m);
}

inline bures::Vector basis_vector(int dim, int k) {
  bures::Vector e = bures::Vector::Zero(dim);
  e(k) = 1.0;
  return e;
}

inline double max_abs(const bures::Matrix& m) {
  return m.cwiseAbs().maxCoeff();
}

}  // namespace testsup

#endif  // BURES_TESTS_SUPPORT_HPP
