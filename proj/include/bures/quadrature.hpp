#ifndef BURES_QUADRATURE_HPP
#define BURES_QUADRATURE_HPP

#include <functional>
#include <utility>
#include <vector>

namespace bures {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (Newton iteration on Legendre polynomials).
const GaussRule& gauss_legendre(int n);

/// Integrates f over [a, b] with an n-point rule split into `panels`
/// equal panels.
double integrate(const std::function<double(double)>& f, double a, double b,
                 int n = 65, int panels = 4);

}  // namespace bures

#endif  // BURES_QUADRATURE_HPP
