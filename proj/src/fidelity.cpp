#include "bures/fidelity.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bures {

namespace {

double clamp01(double x) { return std::min(std::max(x, 0.0), 1.0); }

double fidelity_psd(const Matrix& a, const Matrix& b) {
  require_same_dim(a, b);
  return trace_norm(sqrt_psd(a) * sqrt_psd(b));
}

}  // namespace

PositiveForm validate_positive_form(const Matrix& m, double tol_rank) {
  require_hermitian(m);
  EigenSystem es = hermitian_eig(m);
  const double lmax = std::max(es.eigvals(0), 0.0);
  for (int k = 0; k < es.eigvals.size(); ++k) {
    if (es.eigvals(k) < -tol_rank * (lmax > 0 ? lmax : 1.0)) {
      throw NotPsdError("positive form has a negative eigenvalue");
    }
  }
  const double tr = m.trace().real();
  if (tr > 1.0 + tol::trace_drift) {
    std::ostringstream os;
    os << "positive form has trace " << tr << " > 1";
    throw NotPsdError(os.str());
  }
  return PositiveForm{m, tr};
}

double fidelity(const DensityMatrix& nu, const DensityMatrix& rho) {
  return clamp01(fidelity_psd(nu.matrix, rho.matrix));
}

double fidelity(const PositiveForm& nu, const PositiveForm& rho) {
  return fidelity_psd(nu.matrix, rho.matrix);
}

double fidelity_sqrt_route(const DensityMatrix& nu, const DensityMatrix& rho) {
  require_same_dim(nu.matrix, rho.matrix);
  const Matrix r = sqrt_psd(rho.matrix);
  return clamp01(sqrt_psd(r * nu.matrix * r).trace().real());
}

double bures_distance(const DensityMatrix& nu, const DensityMatrix& rho) {
  return std::sqrt(std::max(2.0 - 2.0 * fidelity(nu, rho), 0.0));
}

double geodesic_distance(const DensityMatrix& nu, const DensityMatrix& rho) {
  return std::acos(fidelity(nu, rho));
}

double decomposition_bound(const DensityMatrix& nu, const DensityMatrix& rho,
                           const std::vector<Matrix>& parts) {
  require_same_dim(nu.matrix, rho.matrix);
  if (parts.empty()) {
    throw NotADecompositionError("empty decomposition");
  }
  const int n = nu.dim();
  Matrix sum = Matrix::Zero(n, n);
  for (const Matrix& x : parts) {
    require_same_dim(x, nu.matrix);
    EigenSystem es = hermitian_eig(x);
    if (es.eigvals(es.eigvals.size() - 1) < -tol::decomposition_closure) {
      throw NotADecompositionError("decomposition part is not psd");
    }
    sum += x;
  }
  if ((sum - Matrix::Identity(n, n)).norm() > tol::decomposition_closure) {
    throw NotADecompositionError("parts do not sum to the identity");
  }
  double bound = 0.0;
  for (const Matrix& x : parts) {
    const double nx = std::max((nu.matrix * x).trace().real(), 0.0);
    const double rx = std::max((rho.matrix * x).trace().real(), 0.0);
    bound += std::sqrt(nx * rx);
  }
  return bound;
}

double variational_bound(const DensityMatrix& nu, const DensityMatrix& rho,
                         const Matrix& x) {
  require_same_dim(nu.matrix, rho.matrix);
  require_hermitian(x);
  EigenSystem es = hermitian_eig(x);
  if (es.eigvals(es.eigvals.size() - 1) <= 0.0) {
    throw NotPsdError("variational bound needs a positive invertible x");
  }
  const Matrix xinv =
      es.eigvecs * es.eigvals.cwiseInverse().asDiagonal() * es.eigvecs.adjoint();
  const double a = (nu.matrix * x).trace().real();
  const double b = (rho.matrix * xinv).trace().real();
  return std::sqrt(std::max(a, 0.0) * std::max(b, 0.0));
}

AlignedPair aligned_pair(const DensityMatrix& nu, const DensityMatrix& rho) {
  require_same_dim(nu.matrix, rho.matrix);
  AlignedPair out;
  out.phi = sqrt_psd(nu.matrix);
  const Matrix cross = out.phi * sqrt_psd(rho.matrix);
  out.completion = polar(cross);
  const Matrix& u_full = out.completion.unitary_completion;
  out.zeta = sqrt_psd(rho.matrix) * u_full.adjoint();
  out.commutant_form = u_full * out.completion.modulus * u_full.adjoint();
  out.fidelity = clamp01(out.completion.modulus.trace().real());
  out.transition = out.fidelity * out.fidelity;
  return out;
}

PositiveForm residual_form(const DensityMatrix& rho, const DensityMatrix& nu) {
  require_same_dim(rho.matrix, nu.matrix);
  const Matrix r = sqrt_psd(rho.matrix);
  // Absolute cut: the modulus has trace norm F <= 1, and for (nearly)
  // orthogonal states its largest eigenvalue is pure rounding noise.
  const Matrix s = support_projector_at(abs_op(sqrt_psd(nu.matrix) * r));
  const int n = rho.dim();
  Matrix res = r * (Matrix::Identity(n, n) - s) * r;
  res = 0.5 * (res + res.adjoint());
  return PositiveForm{res, res.trace().real()};
}

bool arc_unique(const DensityMatrix& nu, const DensityMatrix& rho) {
  return residual_form(rho, nu).weight <= 1e-10 ||
         residual_form(nu, rho).weight <= 1e-10;
}

bool abs_continuous(const DensityMatrix& rho, const DensityMatrix& nu) {
  return support_leq(rho.support, nu.support);
}

bool same_stratum(const DensityMatrix& rho, const DensityMatrix& nu) {
  return abs_continuous(rho, nu) && abs_continuous(nu, rho);
}

std::pair<double, double> hellinger_sqrt_bound(const DensityMatrix& rho,
                                               const DensityMatrix& sigma) {
  require_same_dim(rho.matrix, sigma.matrix);
  const double lhs =
      std::pow(hs_norm(sqrt_psd(rho.matrix) - sqrt_psd(sigma.matrix)), 2);
  const double rhs = trace_norm(rho.matrix - sigma.matrix);
  return {lhs, rhs};
}

std::pair<double, double> upper_root_bound(const DensityMatrix& nu,
                                           const DensityMatrix& rho) {
  return {bures_distance(nu, rho),
          std::sqrt(trace_norm(nu.matrix - rho.matrix))};
}

double hellinger_affinity(const RealVector& p, const RealVector& q) {
  if (p.size() != q.size()) {
    throw DimMismatchError("probability vectors differ in length");
  }
  double acc = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    acc += std::sqrt(std::max(p(i), 0.0) * std::max(q(i), 0.0));
  }
  return acc;
}

std::pair<double, double> prob_vector_bound(const RealVector& xi,
                                            const RealVector& eta) {
  if (xi.size() != eta.size()) {
    throw DimMismatchError("probability vectors differ in length");
  }
  double penalty = 0.0;
  for (int j = 0; j < xi.size(); ++j) {
    if (eta(j) != 0.0) {
      const double diff = xi(j) - eta(j);
      penalty += diff * diff / std::max(xi(j), eta(j));
    }
  }
  return {hellinger_affinity(xi, eta), 1.0 - penalty / 8.0};
}

}  // namespace bures
