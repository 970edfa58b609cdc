#include "bures/geodesics.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <sstream>

#include "bures/quadrature.hpp"

namespace bures {

GeodesicArc geodesic_arc(const DensityMatrix& nu, const DensityMatrix& rho) {
  require_same_dim(nu.matrix, rho.matrix);
  if ((nu.matrix - rho.matrix).norm() <= 1e-12) {
    throw DegenerateEndpointsError("geodesic arc requires nu != rho");
  }
  GeodesicArc arc;
  arc.nu = nu;
  arc.rho = rho;
  arc.pair = aligned_pair(nu, rho);
  arc.F = arc.pair.fidelity;
  arc.P = arc.pair.transition;
  arc.theta0 = std::acos(arc.F);
  arc.cross = arc.pair.zeta * arc.pair.phi.adjoint() +
              arc.pair.phi * arc.pair.zeta.adjoint();
  return arc;
}

double arc_lambda(const GeodesicArc& arc, double t) {
  return -t * arc.F + std::sqrt(std::max(1.0 - t * t * (1.0 - arc.P), 0.0));
}

Matrix implementation_t(const GeodesicArc& arc, double t) {
  return t * arc.pair.zeta + arc_lambda(arc, t) * arc.pair.phi;
}

DensityMatrix eval_t_extended(const GeodesicArc& arc, double t) {
  if (t < -1.0 || t > 1.0) {
    throw ParamOutOfRangeError("arc parameter outside [-1, 1]");
  }
  const double lam = arc_lambda(arc, t);
  Matrix state = t * t * arc.rho.matrix + lam * lam * arc.nu.matrix +
                 t * lam * arc.cross;
  return validate_density(0.5 * (state + state.adjoint()));
}

DensityMatrix eval_t(const GeodesicArc& arc, double t) {
  if (t < 0.0 || t > 1.0) {
    throw ParamOutOfRangeError("arc parameter outside [0, 1]");
  }
  return eval_t_extended(arc, t);
}

DensityMatrix eval_theta(const GeodesicArc& arc, double theta) {
  if (arc.theta0 <= 0.0) {
    throw DegenerateEndpointsError("arc has zero length");
  }
  if (theta < 0.0 || theta > arc.theta0 + 1e-12) {
    std::ostringstream os;
    os << "theta = " << theta << " outside [0, " << arc.theta0 << "]";
    throw ParamOutOfRangeError(os.str());
  }
  const double s0 = std::sin(arc.theta0);
  const double a = std::sin(theta) / s0;
  const double b = std::sin(arc.theta0 - theta) / s0;
  Matrix state =
      a * a * arc.rho.matrix + b * b * arc.nu.matrix + a * b * arc.cross;
  return validate_density(0.5 * (state + state.adjoint()));
}

double dilation_at(const GeodesicArc& arc, double s) {
  if (s < 0.0 || s > 1.0) {
    throw ParamOutOfRangeError("arc parameter outside [0, 1]");
  }
  const double q = 1.0 - arc.P;
  return std::sqrt(q / (1.0 - s * s * q));
}

double arc_length(const GeodesicArc& arc) { return arc.theta0; }

double arc_length_quadrature(const GeodesicArc& arc, int nodes, int panels) {
  // The integrand carries a (1-s)^(-1/2) endpoint singularity as P -> 0;
  // s = 1-(1-u)^2 removes it, so the rule keeps its accuracy even for
  // orthogonal endpoints.
  return integrate(
      [&](double u) {
        const double s = 1.0 - (1.0 - u) * (1.0 - u);
        return dilation_at(arc, s) * 2.0 * (1.0 - u);
      },
      0.0, 1.0, nodes, panels);
}

DensityMatrix osculating_center(const GeodesicArc& arc, double theta1,
                                double theta2) {
  if (!(0.0 <= theta1 && theta1 < theta2 && theta2 <= arc.theta0 + 1e-12)) {
    throw ParamOutOfRangeError("need 0 <= theta1 < theta2 <= theta0");
  }
  const DensityMatrix nu1 = eval_theta(arc, theta1);
  const DensityMatrix nu2 = eval_theta(arc, theta2);
  const AlignedPair sub = aligned_pair(nu1, nu2);
  const double dtheta = theta2 - theta1;
  const double s = std::sin(dtheta);
  const Matrix re_f =
      0.5 * (sub.zeta * sub.phi.adjoint() + sub.phi * sub.zeta.adjoint());
  Matrix center =
      (nu1.matrix + nu2.matrix - 2.0 * std::cos(dtheta) * re_f) / (2.0 * s * s);
  return validate_density(0.5 * (center + center.adjoint()));
}

Matrix GeodesicLoop::implementation(double theta) const {
  return std::sin(theta) * zeta + std::cos(theta) * phi;
}

DensityMatrix GeodesicLoop::at(double theta) const {
  const Matrix c = implementation(theta);
  return validate_density(c * c.adjoint());
}

GeodesicLoop geodesic_loop(const Matrix& phi, const Matrix& zeta) {
  require_same_dim(phi, zeta);
  require_square(phi);
  if (std::abs(hs_norm(phi) - 1.0) > 1e-10 ||
      std::abs(hs_norm(zeta) - 1.0) > 1e-10) {
    throw ParamOutOfRangeError("loop vectors must have unit HS norm");
  }
  Eigen::JacobiSVD<Matrix> sphi(phi), szeta(zeta);
  if ((phi.rows() > 1 && sphi.singularValues()(1) > 1e-10) ||
      (zeta.rows() > 1 && szeta.singularValues()(1) > 1e-10)) {
    throw ParamOutOfRangeError("loop vectors must be rank one");
  }
  const Matrix left_phi = support_projector(phi * phi.adjoint());
  const Matrix left_zeta = support_projector(zeta * zeta.adjoint());
  if ((left_phi * left_zeta).norm() > 1e-10) {
    throw ParamOutOfRangeError("left supports must be orthogonal");
  }
  const Matrix right_phi = support_projector(phi.adjoint() * phi);
  const Matrix right_zeta = support_projector(zeta.adjoint() * zeta);
  if ((right_phi - right_zeta).norm() > 1e-10) {
    throw ParamOutOfRangeError("right supports must agree");
  }
  return GeodesicLoop{phi, zeta};
}

bool extendable_beyond(const DensityMatrix& nu, const DensityMatrix& rho) {
  const AlignedPair pair = aligned_pair(nu, rho);
  return support_leq(nu.support, support_projector_at(pair.commutant_form));
}

bool geodesically_extendable(const DensityMatrix& nu,
                             const DensityMatrix& rho) {
  const AlignedPair pair = aligned_pair(nu, rho);
  const Matrix gram_zeta = pair.zeta.adjoint() * pair.zeta;
  return support_leq(nu.support,
                     support_projector_at(pair.commutant_form + gram_zeta));
}

}  // namespace bures
