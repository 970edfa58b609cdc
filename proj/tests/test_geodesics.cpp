#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

#include <cmath>

#include "bures/geodesics.hpp"

using namespace bures;
using testsup::basis_vector;
using testsup::diag_state;

namespace {

const double kPi = std::acos(-1.0);

GeodesicArc orthogonal_pure_arc(int dim = 2) {
  return geodesic_arc(buresgen::pure_state(dim, 1) /* placeholder */,
                      buresgen::pure_state(dim, 2));
}

}  // namespace

TEST_CASE("arc between orthogonal pure states is the sine interpolation") {
  const DensityMatrix p0 = diag_state({1, 0});
  const DensityMatrix p1 = diag_state({0, 1});
  const GeodesicArc arc = geodesic_arc(p0, p1);
  CHECK(arc.F <= 1e-12);
  CHECK(arc.theta0 == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(arc.cross.norm() <= 1e-12);
  for (double t : {0.0, 0.3, 0.7, 1.0}) {
    const Matrix expected = (1 - t * t) * p0.matrix + t * t * p1.matrix;
    CHECK((eval_t(arc, t).matrix - expected).norm() <= 1e-12);
  }
}

TEST_CASE("commuting full-rank endpoints stay diagonal in the common basis") {
  auto [nu, rho] = buresgen::commuting_pair(4, 9);
  const GeodesicArc arc = geodesic_arc(nu, rho);
  for (double t : {0.1, 0.5, 0.9}) {
    const Matrix in_basis =
        nu.eigvecs.adjoint() * eval_t(arc, t).matrix * nu.eigvecs;
    Matrix off = in_basis;
    off.diagonal().setZero();
    CHECK(off.norm() <= 1e-9);
  }
}

TEST_CASE("degenerate endpoints are rejected") {
  const DensityMatrix rho = buresgen::full_rank_state(3, 7);
  CHECK_THROWS_AS(geodesic_arc(rho, rho), DegenerateEndpointsError);
}

TEST_CASE("eval_t endpoints, lambda values and validity on a grid") {
  const DensityMatrix nu = buresgen::full_rank_state(4, 11);
  const DensityMatrix rho = buresgen::rank_r_state(4, 2, 12);
  const GeodesicArc arc = geodesic_arc(nu, rho);
  CHECK((eval_t(arc, 0.0).matrix - nu.matrix).norm() <= 1e-10);
  CHECK((eval_t(arc, 1.0).matrix - rho.matrix).norm() <= 1e-10);
  CHECK(arc_lambda(arc, 0.0) == doctest::Approx(1.0));
  CHECK(std::abs(arc_lambda(arc, 1.0)) <= 1e-12);
  for (int j = 0; j < 65; ++j) {
    const double t = j / 64.0;
    const DensityMatrix sample = eval_t(arc, t);  // validates internally
    CHECK(sample.eigvals.sum() == doctest::Approx(1.0).epsilon(1e-10));
    // Matches the implementing-vector route phi_t phi_t*.
    const Matrix c = implementation_t(arc, t);
    CHECK((c * c.adjoint() - sample.matrix).norm() <= 1e-10);
  }
  CHECK_THROWS_AS(eval_t(arc, 1.5), ParamOutOfRangeError);
  CHECK_THROWS_AS(eval_t(arc, -0.5), ParamOutOfRangeError);
}

TEST_CASE("eval_theta matches eval_t and is metrically affine") {
  const DensityMatrix nu = buresgen::full_rank_state(3, 21);
  const DensityMatrix rho = buresgen::full_rank_state(3, 22);
  const GeodesicArc arc = geodesic_arc(nu, rho);
  CHECK((eval_theta(arc, 0.0).matrix - nu.matrix).norm() <= 1e-10);
  CHECK((eval_theta(arc, arc.theta0).matrix - rho.matrix).norm() <= 1e-10);

  for (double frac : {0.15, 0.4, 0.8}) {
    const double theta = frac * arc.theta0;
    const double t = std::sin(theta) / std::sin(arc.theta0);
    CHECK((eval_theta(arc, theta).matrix - eval_t(arc, t).matrix).norm() <=
          1e-10);
    CHECK(geodesic_distance(nu, eval_theta(arc, theta)) ==
          doctest::Approx(theta).epsilon(1e-8));
  }

  const DensityMatrix mid = eval_theta(arc, arc.theta0 / 2);
  CHECK(std::abs(geodesic_distance(nu, mid) - arc.theta0 / 2) <= 1e-8);
  CHECK(std::abs(geodesic_distance(mid, rho) - arc.theta0 / 2) <= 1e-8);

  // Additivity on a grid of pairs.
  for (int a = 1; a < 5; ++a) {
    for (int b = a + 1; b <= 5; ++b) {
      const double t1 = arc.theta0 * a / 5, t2 = arc.theta0 * b / 5;
      CHECK(std::abs(geodesic_distance(eval_theta(arc, t1),
                                       eval_theta(arc, t2)) -
                     (t2 - t1)) <= 1e-8);
    }
  }
}

TEST_CASE("dilation closed form") {
  const DensityMatrix p0 = diag_state({1, 0});
  const DensityMatrix p1 = diag_state({0, 1});
  const GeodesicArc orth = geodesic_arc(p0, p1);
  CHECK(dilation_at(orth, 0.0) == doctest::Approx(1.0));

  const DensityMatrix nu = buresgen::full_rank_state(3, 31);
  const DensityMatrix rho = buresgen::full_rank_state(3, 32);
  const GeodesicArc arc = geodesic_arc(nu, rho);
  CHECK(dilation_at(arc, 0.0) ==
        doctest::Approx(std::sqrt(1.0 - arc.P)).epsilon(1e-12));

  // P = 0.5, s = 0.5 evaluates to sqrt(0.5 / 0.875).
  GeodesicArc half = arc;
  half.P = 0.5;
  CHECK(dilation_at(half, 0.5) ==
        doctest::Approx(0.7559289460184544).epsilon(1e-12));
}

TEST_CASE("arc length and its quadrature") {
  const DensityMatrix p0 = diag_state({1, 0});
  const DensityMatrix p1 = diag_state({0, 1});
  CHECK(arc_length(geodesic_arc(p0, p1)) ==
        doctest::Approx(kPi / 2).epsilon(1e-12));

  // F = 1/sqrt(2) pure pair has length pi/4.
  Vector e0 = basis_vector(2, 0);
  Vector plus = (basis_vector(2, 0) + basis_vector(2, 1)) / std::sqrt(2.0);
  const DensityMatrix a = validate_density(e0 * e0.adjoint());
  const DensityMatrix b = validate_density(plus * plus.adjoint());
  CHECK(arc_length(geodesic_arc(a, b)) ==
        doctest::Approx(kPi / 4).epsilon(1e-10));

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int dim = 2 + static_cast<int>(seed % 5);
    const GeodesicArc arc =
        geodesic_arc(buresgen::full_rank_state(dim, 100 + 2 * seed),
                     buresgen::full_rank_state(dim, 101 + 2 * seed));
    CHECK(std::abs(arc_length_quadrature(arc) - arc.theta0) <= 1e-6);
  }
}

TEST_CASE("osculating center") {
  const DensityMatrix p0 = diag_state({1, 0});
  const DensityMatrix p1 = diag_state({0, 1});
  const GeodesicArc orth = geodesic_arc(p0, p1);
  const DensityMatrix center = osculating_center(orth, 0.0, kPi / 2);
  CHECK((center.matrix - 0.5 * (p0.matrix + p1.matrix)).norm() <= 1e-10);

  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const int dim = 2 + static_cast<int>(seed % 3);
    const GeodesicArc arc =
        geodesic_arc(buresgen::full_rank_state(dim, 200 + 2 * seed),
                     buresgen::full_rank_state(dim, 201 + 2 * seed));
    const DensityMatrix mu =
        osculating_center(arc, 0.1 * arc.theta0, 0.9 * arc.theta0);
    CHECK(mu.eigvals.sum() == doctest::Approx(1.0).epsilon(1e-10));

    // ODE check: (1/4) nu'' + nu = mu_C by second central differences.
    const double h = std::min(1e-3, arc.theta0 / 100);
    for (double frac : {0.3, 0.5, 0.7}) {
      const double theta = frac * arc.theta0;
      const Matrix second = (eval_theta(arc, theta + h).matrix -
                             2.0 * eval_theta(arc, theta).matrix +
                             eval_theta(arc, theta - h).matrix) /
                            (h * h);
      const Matrix residual =
          0.25 * second + eval_theta(arc, theta).matrix - mu.matrix;
      CHECK(residual.norm() <= 1e-4);
    }
  }
}

TEST_CASE("geodesic loop") {
  const int dim = 3;
  Vector e = basis_vector(dim, 0);
  Vector g = basis_vector(dim, 1);
  const Matrix phi = e * e.adjoint();
  const Matrix zeta = g * e.adjoint();
  const GeodesicLoop loop = geodesic_loop(phi, zeta);

  for (int j = 0; j < 32; ++j) {
    const double theta = 2.0 * kPi * j / 32;
    CHECK((loop.at(theta + kPi).matrix - loop.at(theta).matrix).norm() <=
          1e-10);
    CHECK(loop.at(theta).rank == 1);  // stays pure
  }
  CHECK(loop.at(kPi / 4).eigvals(0) == doctest::Approx(1.0));

  // Quarter turns are geodesic arcs of length pi/2.
  CHECK(geodesic_distance(loop.at(0.0), loop.at(kPi / 2)) ==
        doctest::Approx(kPi / 2).epsilon(1e-12));
  const GeodesicArc quarter = geodesic_arc(loop.at(0.0), loop.at(kPi / 2));
  CHECK(std::abs(arc_length_quadrature(quarter) - kPi / 2) <= 1e-6);

  // Invalid inputs are rejected.
  CHECK_THROWS_AS(geodesic_loop(phi, phi), ParamOutOfRangeError);
  const Matrix not_rank_one = 0.5 * (e * e.adjoint() + g * g.adjoint()) * 2.0;
  CHECK_THROWS_AS(geodesic_loop(phi, not_rank_one), ParamOutOfRangeError);
}

TEST_CASE("extension predicates") {
  const DensityMatrix nu = buresgen::full_rank_state(3, 41);
  const DensityMatrix rho = buresgen::full_rank_state(3, 42);
  CHECK(extendable_beyond(nu, rho));
  CHECK(geodesically_extendable(nu, rho));

  const DensityMatrix p0 = diag_state({1, 0});
  const DensityMatrix p1 = diag_state({0, 1});
  CHECK(!extendable_beyond(p0, p1));
  CHECK(!geodesically_extendable(p0, p1));

  // nu pure inside supp rho, rho rank-deficient around it.
  const DensityMatrix point = diag_state({1, 0, 0});
  const DensityMatrix around = diag_state({0.5, 0.5, 0});
  const AlignedPair pair = aligned_pair(point, around);
  const bool support_oracle =
      support_leq(point.support, support_projector(pair.commutant_form));
  CHECK(extendable_beyond(point, around) == support_oracle);
  CHECK(support_oracle);  // s(K) covers the pure direction here
}

TEST_CASE("implementation right supports are constant along the open arc") {
  const DensityMatrix nu = buresgen::rank_r_state(4, 2, 51);
  const DensityMatrix rho = buresgen::rank_r_state(4, 3, 52);
  const GeodesicArc arc = geodesic_arc(nu, rho);
  auto right_support = [&](double t) {
    const Matrix c = implementation_t(arc, t);
    return support_projector(c.adjoint() * c, 1e-9);
  };
  const Matrix reference = right_support(0.5);
  for (double t : {0.1, 0.25, 0.75, 0.9}) {
    CHECK((right_support(t) - reference).norm() <= 1e-8);
  }
}

TEST_CASE("absolutely continuous target keeps the arc inside the support") {
  // rho -| nu: supp(rho) <= supp(nu).
  const DensityMatrix nu = diag_state({0.5, 0.3, 0.2, 0.0});
  const DensityMatrix rho = diag_state({0.6, 0.4, 0.0, 0.0});
  CHECK(abs_continuous(rho, nu));
  const GeodesicArc arc = geodesic_arc(nu, rho);
  for (double t : {0.2, 0.5, 0.8}) {
    CHECK(support_leq(eval_t(arc, t).support, nu.support));
  }
}

TEST_CASE("implementing-path length bound") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const GeodesicArc arc =
        geodesic_arc(buresgen::full_rank_state(3, 300 + 2 * seed),
                     buresgen::rank_r_state(3, 2, 301 + 2 * seed));
    const double target = std::asin(std::sqrt(1.0 - arc.P));
    double previous = 0.0;
    for (int level = 4; level <= 12; level += 4) {
      const int segments = 1 << level;
      double sum = 0.0;
      Matrix last = implementation_t(arc, 0.0);
      for (int j = 1; j <= segments; ++j) {
        Matrix next = implementation_t(arc, static_cast<double>(j) / segments);
        sum += (next - last).norm();
        last = std::move(next);
      }
      CHECK(sum >= previous - 1e-12);  // refinement is monotone
      previous = sum;
    }
    CHECK(previous >= target - 1e-8);
  }
}

TEST_CASE("midpoints of full-rank pairs are full rank") {
  for (int dim : {2, 5, 9, 16}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const GeodesicArc arc =
          geodesic_arc(buresgen::full_rank_state(dim, 400 + 2 * seed),
                       buresgen::full_rank_state(dim, 401 + 2 * seed));
      const DensityMatrix mid = eval_theta(arc, arc.theta0 / 2);
      CHECK(mid.rank == dim);
      CHECK(mid.eigvals(dim - 1) > 1e-12);
    }
  }
}
