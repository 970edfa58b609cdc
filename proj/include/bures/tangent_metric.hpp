#ifndef BURES_TANGENT_METRIC_HPP
#define BURES_TANGENT_METRIC_HPP

#include <vector>

#include "bures/operator_core.hpp"

namespace bures {

/// Traceless Hermitian matrix T representing the tangent form f(x) = tr(T x)
/// at a base state. Membership at a rank-deficient base additionally needs the
/// off-support block (1-s) T (1-s) to vanish.
struct TangentForm {
  Matrix matrix;
};

bool in_tangent_space(const DensityMatrix& rho, const Matrix& t,
                      double block_tol = tol::support_cmp);

/// Validates Hermiticity, tracelessness and the off-support block condition.
TangentForm validate_tangent_form(const DensityMatrix& rho, const Matrix& t);

/// Hermitian x with x rho + rho x = T on the support of rho, entrywise
/// T_jk / (lambda_j + lambda_k) in the eigenbasis; kernel-kernel block zero.
Matrix lyapunov_solve(const DensityMatrix& rho, const TangentForm& t);

/// Integral route int_0^inf exp(-s rho) T exp(-s rho) ds, evaluated per
/// eigenbasis entry by Gauss-Legendre quadrature after substituting
/// u = exp(-lambda_min s).
Matrix lyapunov_integral(const DensityMatrix& rho, const TangentForm& t,
                         int nodes = 200);

/// The unique psi0 in [B(H)_h sqrt(rho)] with T = psi0 sqrt(rho) +
/// sqrt(rho) psi0*; entrywise sqrt(lambda_k)/(lambda_j + lambda_k) T_jk over
/// columns with lambda_k > 0.
Matrix psi0(const DensityMatrix& rho, const TangentForm& t);

struct TangentNormRoutes {
  double huebner = 0.0;    // spectral formula
  double psi0_norm = 0.0;  // ||psi0||_HS
  double ds_leaf = 0.0;    // sqrt(tr rho x^2), populated for full-rank bases
  bool has_ds_leaf = false;
  double spread() const;
};

TangentNormRoutes tangent_norm_routes(const DensityMatrix& rho,
                                      const TangentForm& t);

/// Bures tangent norm ||f||_rho. Computes the spectral formula and
/// ||psi0||_HS, insists they agree to 1e-10, and returns the spectral value.
double tangent_norm(const DensityMatrix& rho, const TangentForm& t);

/// Value (1/2) sqrt(sum' f(x_j)^2 / nu(x_j)) of one finite positive
/// decomposition of the identity; terms with vanishing denominator are
/// skipped.
double decomposition_value(const DensityMatrix& rho, const TangentForm& t,
                           const std::vector<Matrix>& parts);

/// Rank-one eigenprojector partition of lyapunov_solve(rho, t); its
/// decomposition value reaches the tangent norm.
std::vector<Matrix> spectral_oracle_partition(const DensityMatrix& rho,
                                              const TangentForm& t);

/// Max decomposition value over the supplied partitions (the sampled
/// realization of the defining supremum).
double tangent_norm_oracle(const DensityMatrix& rho, const TangentForm& t,
                           const std::vector<std::vector<Matrix>>& partitions);

/// Squared length element tr((x sqrt(rho))(x sqrt(rho))*) = tr(rho x^2)
/// with x = lyapunov_solve; equals tangent_norm^2.
double ds2_leaf(const DensityMatrix& rho, const TangentForm& t);

/// Derivative of the matrix square root along T at a full-rank base,
/// entrywise T_jk / (sqrt(lambda_j) + sqrt(lambda_k)).
Matrix sqrt_derivative(const DensityMatrix& rho, const TangentForm& t);

/// The canonical curve nu_t = (nu + t T + t^2 omega)/(1 + t^2 ||f||^2) on
/// [-1, 1], with omega = psi0 psi0*; carries its own HS implementation
/// c_t = (sqrt(nu) + t psi0)/sqrt(1 + t^2 ||f||^2).
struct CanonicalCurve {
  DensityMatrix base;
  Matrix tangent;
  Matrix psi;        // psi0 at the base
  Matrix omega;      // psi0 psi0*
  double norm2 = 0;  // ||f||_nu^2

  DensityMatrix at(double t) const;
  Matrix implementation(double t) const;
};

CanonicalCurve canonical_curve(const DensityMatrix& nu, const TangentForm& t);

}  // namespace bures

#endif  // BURES_TANGENT_METRIC_HPP
