#include "bures/tangent_metric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bures/quadrature.hpp"

namespace bures {

namespace {

// T expressed in the eigenbasis of rho.
Matrix to_eigenbasis(const DensityMatrix& rho, const Matrix& t) {
  return rho.eigvecs.adjoint() * t * rho.eigvecs;
}

Matrix from_eigenbasis(const DensityMatrix& rho, const Matrix& t) {
  return rho.eigvecs * t * rho.eigvecs.adjoint();
}

}  // namespace

bool in_tangent_space(const DensityMatrix& rho, const Matrix& t,
                      double block_tol) {
  if (t.rows() != rho.dim() || t.cols() != rho.dim()) return false;
  if (!is_hermitian(t)) return false;
  if (std::abs(t.trace().real()) > 1e-10 * (1.0 + t.norm())) return false;
  if (rho.full_rank()) return true;
  const Matrix comp = Matrix::Identity(rho.dim(), rho.dim()) - rho.support;
  return (comp * t * comp).norm() <= block_tol * (1.0 + t.norm());
}

TangentForm validate_tangent_form(const DensityMatrix& rho, const Matrix& t) {
  require_same_dim(t, rho.matrix);
  require_hermitian(t);
  if (std::abs(t.trace().real()) > 1e-10 * (1.0 + t.norm())) {
    throw NotInTangentSpaceError("tangent form is not traceless");
  }
  if (!in_tangent_space(rho, t)) {
    throw NotInTangentSpaceError(
        "off-support block (1-s) T (1-s) does not vanish");
  }
  return TangentForm{0.5 * (t + t.adjoint())};
}

Matrix lyapunov_solve(const DensityMatrix& rho, const TangentForm& t) {
  if (!in_tangent_space(rho, t.matrix)) {
    throw NotInTangentSpaceError("lyapunov_solve: T not in tangent space");
  }
  const int n = rho.dim();
  const Matrix tt = to_eigenbasis(rho, t.matrix);
  Matrix x = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (j >= rho.rank && k >= rho.rank) continue;
      x(j, k) = tt(j, k) / (rho.eigvals(j) + rho.eigvals(k));
    }
  }
  return from_eigenbasis(rho, x);
}

Matrix lyapunov_integral(const DensityMatrix& rho, const TangentForm& t,
                         int nodes) {
  if (!in_tangent_space(rho, t.matrix)) {
    throw NotInTangentSpaceError("lyapunov_integral: T not in tangent space");
  }
  const int n = rho.dim();
  if (rho.rank == 0) return Matrix::Zero(n, n);
  const double lambda_min = rho.eigvals(rho.rank - 1);
  const Matrix tt = to_eigenbasis(rho, t.matrix);
  Matrix x = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (j >= rho.rank && k >= rho.rank) continue;
      const double p = (rho.eigvals(j) + rho.eigvals(k)) / lambda_min;
      // int_0^inf exp(-(l_j + l_k) s) ds after u = exp(-lambda_min s).
      const double integral =
          integrate([p](double u) { return std::pow(u, p - 1.0); }, 0.0, 1.0,
                    nodes, 1) /
          lambda_min;
      x(j, k) = tt(j, k) * integral;
    }
  }
  return from_eigenbasis(rho, x);
}

Matrix psi0(const DensityMatrix& rho, const TangentForm& t) {
  if (!in_tangent_space(rho, t.matrix)) {
    throw NotInTangentSpaceError("psi0: T not in tangent space");
  }
  const int n = rho.dim();
  const Matrix tt = to_eigenbasis(rho, t.matrix);
  Matrix p = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < rho.rank; ++k) {
      const double lk = rho.eigvals(k);
      p(j, k) = std::sqrt(lk) / (rho.eigvals(j) + lk) * tt(j, k);
    }
  }
  return from_eigenbasis(rho, p);
}

double TangentNormRoutes::spread() const {
  double lo = std::min(huebner, psi0_norm);
  double hi = std::max(huebner, psi0_norm);
  if (has_ds_leaf) {
    lo = std::min(lo, ds_leaf);
    hi = std::max(hi, ds_leaf);
  }
  return hi - lo;
}

TangentNormRoutes tangent_norm_routes(const DensityMatrix& rho,
                                      const TangentForm& t) {
  if (!in_tangent_space(rho, t.matrix)) {
    throw NotInTangentSpaceError("tangent_norm: T not in tangent space");
  }
  const Matrix tt = to_eigenbasis(rho, t.matrix);
  double huebner2 = 0.0;
  for (int j = 0; j < rho.dim(); ++j) {
    for (int k = 0; k < rho.rank; ++k) {
      const double denom = rho.eigvals(j) + rho.eigvals(k);
      huebner2 += rho.eigvals(k) / (denom * denom) * std::norm(tt(j, k));
    }
  }
  TangentNormRoutes routes;
  routes.huebner = std::sqrt(huebner2);
  routes.psi0_norm = hs_norm(psi0(rho, t));
  if (rho.full_rank()) {
    routes.ds_leaf = std::sqrt(std::max(ds2_leaf(rho, t), 0.0));
    routes.has_ds_leaf = true;
  }
  return routes;
}

double tangent_norm(const DensityMatrix& rho, const TangentForm& t) {
  const TangentNormRoutes routes = tangent_norm_routes(rho, t);
  if (std::abs(routes.huebner - routes.psi0_norm) >
      1e-10 * (1.0 + routes.huebner)) {
    std::ostringstream os;
    os << "tangent-norm routes disagree: spectral " << routes.huebner
       << " vs psi0 " << routes.psi0_norm;
    throw Error("RouteDisagreement", os.str());
  }
  return routes.huebner;
}

double decomposition_value(const DensityMatrix& rho, const TangentForm& t,
                           const std::vector<Matrix>& parts) {
  if (parts.empty()) {
    throw NotADecompositionError("empty decomposition");
  }
  const int n = rho.dim();
  Matrix sum = Matrix::Zero(n, n);
  for (const Matrix& x : parts) {
    require_same_dim(x, rho.matrix);
    EigenSystem es = hermitian_eig(x);
    if (es.eigvals(es.eigvals.size() - 1) < -tol::decomposition_closure) {
      throw NotADecompositionError("decomposition part is not psd");
    }
    sum += x;
  }
  if ((sum - Matrix::Identity(n, n)).norm() > tol::decomposition_closure) {
    throw NotADecompositionError("parts do not sum to the identity");
  }
  double acc = 0.0;
  for (const Matrix& x : parts) {
    const double nu_x = (rho.matrix * x).trace().real();
    if (nu_x <= 1e-14) continue;
    const double f_x = (t.matrix * x).trace().real();
    acc += f_x * f_x / nu_x;
  }
  return 0.5 * std::sqrt(acc);
}

std::vector<Matrix> spectral_oracle_partition(const DensityMatrix& rho,
                                              const TangentForm& t) {
  const Matrix x = lyapunov_solve(rho, t);
  EigenSystem es = hermitian_eig(x);
  std::vector<Matrix> parts;
  parts.reserve(es.dim());
  for (int k = 0; k < es.dim(); ++k) parts.push_back(es.projector(k));
  return parts;
}

double tangent_norm_oracle(
    const DensityMatrix& rho, const TangentForm& t,
    const std::vector<std::vector<Matrix>>& partitions) {
  double best = 0.0;
  for (const auto& parts : partitions) {
    best = std::max(best, decomposition_value(rho, t, parts));
  }
  return best;
}

double ds2_leaf(const DensityMatrix& rho, const TangentForm& t) {
  const Matrix x = lyapunov_solve(rho, t);
  const Matrix a = x * sqrt_psd(rho.matrix);
  return (a * a.adjoint()).trace().real();
}

Matrix sqrt_derivative(const DensityMatrix& rho, const TangentForm& t) {
  if (!rho.full_rank()) {
    throw NotFullRankError("sqrt_derivative needs a full-rank base");
  }
  if (!in_tangent_space(rho, t.matrix)) {
    throw NotInTangentSpaceError("sqrt_derivative: T not in tangent space");
  }
  const int n = rho.dim();
  const Matrix tt = to_eigenbasis(rho, t.matrix);
  Matrix d(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      d(j, k) =
          tt(j, k) / (std::sqrt(rho.eigvals(j)) + std::sqrt(rho.eigvals(k)));
    }
  }
  return from_eigenbasis(rho, d);
}

DensityMatrix CanonicalCurve::at(double t) const {
  if (t < -1.0 || t > 1.0) {
    throw ParamOutOfRangeError("canonical curve parameter outside [-1, 1]");
  }
  Matrix state =
      (base.matrix + t * tangent + t * t * omega) / (1.0 + t * t * norm2);
  return validate_density(0.5 * (state + state.adjoint()));
}

Matrix CanonicalCurve::implementation(double t) const {
  return (sqrt_psd(base.matrix) + t * psi) / std::sqrt(1.0 + t * t * norm2);
}

CanonicalCurve canonical_curve(const DensityMatrix& nu, const TangentForm& t) {
  CanonicalCurve curve;
  curve.base = nu;
  curve.tangent = t.matrix;
  curve.psi = psi0(nu, t);
  curve.omega = curve.psi * curve.psi.adjoint();
  curve.norm2 = curve.omega.trace().real();
  return curve;
}

}  // namespace bures
