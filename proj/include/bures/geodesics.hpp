#ifndef BURES_GEODESICS_HPP
#define BURES_GEODESICS_HPP

#include "bures/fidelity.hpp"
#include "bures/operator_core.hpp"

namespace bures {

/// Geodesic arc from nu (t = 0) to rho (t = 1), built on an aligned
/// implementing pair. States along the arc:
///   nu_t = t^2 rho + lambda(t)^2 nu + t lambda(t) cross,
///   lambda(t) = -t F + sqrt(1 - t^2 (1 - P)),
/// with cross = zeta phi* + phi zeta* and theta0 = arccos F.
struct GeodesicArc {
  DensityMatrix nu;
  DensityMatrix rho;
  AlignedPair pair;
  double F = 0.0;
  double P = 0.0;
  double theta0 = 0.0;
  Matrix cross;
};

GeodesicArc geodesic_arc(const DensityMatrix& nu, const DensityMatrix& rho);

double arc_lambda(const GeodesicArc& arc, double t);

/// State at affine parameter t in [0, 1].
DensityMatrix eval_t(const GeodesicArc& arc, double t);

/// State at affine parameter t in [-1, 1]; the construction extends past the
/// left endpoint and this extension is what finite differences at t = 0 use.
DensityMatrix eval_t_extended(const GeodesicArc& arc, double t);

/// Implementing Hilbert-Schmidt vector phi_t = t zeta + lambda(t) phi.
Matrix implementation_t(const GeodesicArc& arc, double t);

/// State at arc-length parameter theta in [0, theta0]:
/// (sin th / sin th0)^2 rho + (sin(th0-th)/sin th0)^2 nu + cross term.
DensityMatrix eval_theta(const GeodesicArc& arc, double theta);

/// Local dilation sqrt((1-P) / (1 - s^2 (1-P))) at s in [0, 1].
double dilation_at(const GeodesicArc& arc, double s);

/// Bures length arccos F of the arc.
double arc_length(const GeodesicArc& arc);

/// Quadrature of dilation_at over [0,1] (composite Gauss-Legendre);
/// agrees with arc_length to high accuracy, exposed for verification.
double arc_length_quadrature(const GeodesicArc& arc, int nodes = 65,
                             int panels = 4);

/// Osculating center of the sub-arc [theta1, theta2]: the state mu_C with
/// (1/4) nu_theta'' + nu_theta = mu_C, built from the sub-arc's own aligned
/// pair.
DensityMatrix osculating_center(const GeodesicArc& arc, double theta1,
                                double theta2);

/// Closed geodesic through rank-one implementing vectors:
/// phi_theta = zeta sin(theta) + phi cos(theta), cycle length pi.
/// Requires unit rank-one phi, zeta with orthogonal left supports and equal
/// right supports.
struct GeodesicLoop {
  Matrix phi;
  Matrix zeta;
  Matrix implementation(double theta) const;
  DensityMatrix at(double theta) const;
};

GeodesicLoop geodesic_loop(const Matrix& phi, const Matrix& zeta);

/// Whether the arc from nu to rho extends as a shortest path beyond rho:
/// s(nu) <= s(K) with K the commutant-form matrix of the aligned pair.
bool extendable_beyond(const DensityMatrix& nu, const DensityMatrix& rho);

/// Geodesic extension beyond rho exists iff s(nu) <= s(K + zeta* zeta).
bool geodesically_extendable(const DensityMatrix& nu, const DensityMatrix& rho);

}  // namespace bures

#endif  // BURES_GEODESICS_HPP
