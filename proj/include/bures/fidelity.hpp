#ifndef BURES_FIDELITY_HPP
#define BURES_FIDELITY_HPP

#include <utility>
#include <vector>

#include "bures/operator_core.hpp"

namespace bures {

/// Implementing pair (phi, zeta) realizing the fidelity:
/// phi = sqrt(nu), zeta = sqrt(rho) U* with U the unitary completion of the
/// polar factor of sqrt(nu) sqrt(rho). Then <zeta,phi>_HS = F and the
/// commutant-form matrix K = U |sqrt(nu) sqrt(rho)| U* is psd.
struct AlignedPair {
  Matrix phi;
  Matrix zeta;
  PolarFactors completion;  // polar factors of sqrt(nu) sqrt(rho)
  Matrix commutant_form;    // K
  double fidelity = 0.0;    // F
  double transition = 0.0;  // P = F^2
};

/// Positive semidefinite Hermitian matrix with trace <= 1; the finite
/// realization of a positive linear form dominated by a state.
struct PositiveForm {
  Matrix matrix;
  double weight = 0.0;  // trace
};

PositiveForm validate_positive_form(const Matrix& m,
                                    double tol_rank = tol::rank_rel);

/// Fidelity tr|sqrt(nu) sqrt(rho)| between psd matrices (states or positive
/// forms), clamped into [0, 1] for states.
double fidelity(const DensityMatrix& nu, const DensityMatrix& rho);
double fidelity(const PositiveForm& nu, const PositiveForm& rho);

/// Alternative route tr sqrt( sqrt(rho) nu sqrt(rho) ), exposed for
/// cross-checking against the singular-value route.
double fidelity_sqrt_route(const DensityMatrix& nu, const DensityMatrix& rho);

/// d_B = sqrt(2 - 2F).
double bures_distance(const DensityMatrix& nu, const DensityMatrix& rho);

/// Inner (geodesic) distance arccos F in [0, pi/2].
double geodesic_distance(const DensityMatrix& nu, const DensityMatrix& rho);

/// Upper bound sum_k sqrt(nu(x_k) rho(x_k)) over a finite positive
/// decomposition of the identity. Throws NotADecompositionError if the parts
/// are not psd or do not sum to the identity.
double decomposition_bound(const DensityMatrix& nu, const DensityMatrix& rho,
                           const std::vector<Matrix>& parts);

/// Variational upper bound sqrt(nu(x) rho(x^-1)) for positive invertible x.
double variational_bound(const DensityMatrix& nu, const DensityMatrix& rho,
                         const Matrix& x);

AlignedPair aligned_pair(const DensityMatrix& nu, const DensityMatrix& rho);

/// Largest positive form below rho and orthogonal to nu:
/// rho_nu = sqrt(rho) (1 - s(|sqrt(nu) sqrt(rho)|)) sqrt(rho).
PositiveForm residual_form(const DensityMatrix& rho, const DensityMatrix& nu);

/// In B(H) the connecting arc is unique iff one of the residual forms
/// rho_nu, nu_rho vanishes.
bool arc_unique(const DensityMatrix& nu, const DensityMatrix& rho);

/// Support inclusion s(rho) <= s(nu) / support equality.
bool abs_continuous(const DensityMatrix& rho, const DensityMatrix& nu);
bool same_stratum(const DensityMatrix& rho, const DensityMatrix& nu);

/// (||sqrt(rho) - sqrt(sigma)||_HS^2, ||rho - sigma||_1); lhs <= rhs.
std::pair<double, double> hellinger_sqrt_bound(const DensityMatrix& rho,
                                               const DensityMatrix& sigma);

/// (d_B(nu, rho), sqrt(||nu - rho||_1)); first <= second.
std::pair<double, double> upper_root_bound(const DensityMatrix& nu,
                                           const DensityMatrix& rho);

/// Classical Hellinger affinity sum_i sqrt(p_i q_i) of probability vectors.
double hellinger_affinity(const RealVector& p, const RealVector& q);

/// Both sides of the probability-vector estimate
/// sum sqrt(xi_j eta_j) <= 1 - (1/8) sum_{eta_j != 0} (xi_j - eta_j)^2 / max.
std::pair<double, double> prob_vector_bound(const RealVector& xi,
                                            const RealVector& eta);

}  // namespace bures

#endif  // BURES_FIDELITY_HPP
