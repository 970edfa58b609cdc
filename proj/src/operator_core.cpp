#include "bures/operator_core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bures {

bool is_hermitian(const Matrix& a, double tolerance) {
  if (a.rows() != a.cols()) return false;
  const double scale = 1.0 + a.cwiseAbs().maxCoeff();
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tolerance * scale;
}

void require_hermitian(const Matrix& a, double tolerance) {
  if (a.rows() != a.cols()) {
    throw NonHermitianError("matrix is not square");
  }
  if (!is_hermitian(a, tolerance)) {
    std::ostringstream os;
    os << "Hermiticity violated: ||A - A*||_max = "
       << (a - a.adjoint()).cwiseAbs().maxCoeff();
    throw NonHermitianError(os.str());
  }
}

void require_square(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw ShapeMismatchError("matrix is not square");
  }
}

void require_same_dim(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << "dimension mismatch: " << a.rows() << "x" << a.cols() << " vs "
       << b.rows() << "x" << b.cols();
    throw DimMismatchError(os.str());
  }
}

EigenSystem hermitian_eig(const Matrix& a) {
  require_hermitian(a);
  // Symmetrize before handing to the solver so the result is exact for the
  // Hermitian part actually used downstream.
  const Matrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error("EigenFailure", "self-adjoint eigensolver did not converge");
  }
  const int n = static_cast<int>(sym.rows());
  EigenSystem out;
  out.eigvals.resize(n);
  out.eigvecs.resize(n, n);
  // Eigen returns ascending order; flip to descending.
  for (int k = 0; k < n; ++k) {
    out.eigvals(k) = solver.eigenvalues()(n - 1 - k);
    out.eigvecs.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  return out;
}

Matrix sqrt_psd(const Matrix& a, double tol_rank) {
  EigenSystem es = hermitian_eig(a);
  const double lmax = es.eigvals.size() ? std::max(es.eigvals(0), 0.0) : 0.0;
  RealVector roots(es.eigvals.size());
  for (int k = 0; k < es.eigvals.size(); ++k) {
    double lam = es.eigvals(k);
    if (lam < -tol_rank * (lmax > 0 ? lmax : 1.0)) {
      std::ostringstream os;
      os << "negative eigenvalue " << lam << " beyond clamping threshold";
      throw NotPsdError(os.str());
    }
    roots(k) = std::sqrt(std::max(lam, 0.0));
  }
  return es.eigvecs * roots.asDiagonal() * es.eigvecs.adjoint();
}

Matrix abs_op(const Matrix& a) {
  require_square(a);
  return sqrt_psd(a.adjoint() * a);
}

PolarFactors polar(const Matrix& a) {
  require_square(a);
  const int n = static_cast<int>(a.rows());
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  const double cut = tol::rank_rel * (smax > 0 ? smax : 1.0);

  PolarFactors out;
  out.modulus = svd.matrixV() * sv.asDiagonal() * svd.matrixV().adjoint();
  out.partial_isometry = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    if (sv(k) > cut) {
      out.partial_isometry +=
          svd.matrixU().col(k) * svd.matrixV().col(k).adjoint();
    }
  }
  // Full-index pairing of the singular bases completes u to a unitary; the
  // k-th left null vector is matched with the k-th right null vector.
  out.unitary_completion = svd.matrixU() * svd.matrixV().adjoint();
  return out;
}

Matrix support_projector(const Matrix& psd, double tol_rank) {
  EigenSystem es = hermitian_eig(psd);
  const double lmax = es.eigvals.size() ? std::max(es.eigvals(0), 0.0) : 0.0;
  if (es.eigvals.size() &&
      es.eigvals(es.eigvals.size() - 1) < -tol_rank * (lmax > 0 ? lmax : 1.0)) {
    throw NotPsdError("support_projector: input is not psd");
  }
  const int n = es.dim();
  Matrix p = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    if (es.eigvals(k) > tol_rank * lmax) p += es.projector(k);
  }
  return p;
}

Matrix support_projector_at(const Matrix& psd, double cut) {
  EigenSystem es = hermitian_eig(psd);
  const int n = es.dim();
  Matrix p = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    if (es.eigvals(k) > cut) p += es.projector(k);
  }
  return p;
}

double trace_norm(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues().sum();
}

Complex hs_inner(const Matrix& a, const Matrix& b) {
  require_same_dim(a, b);
  return (a * b.adjoint()).trace();
}

double hs_norm(const Matrix& a) { return a.norm(); }

DensityMatrix density_from_eigen(const RealVector& eigvals_desc,
                                 const Matrix& eigvecs, double tol_rank) {
  DensityMatrix dm;
  dm.eigvals = eigvals_desc;
  dm.eigvecs = eigvecs;
  dm.matrix = eigvecs * eigvals_desc.asDiagonal() * eigvecs.adjoint();
  const int n = static_cast<int>(eigvals_desc.size());
  const double lmax = n ? eigvals_desc(0) : 0.0;
  dm.support = Matrix::Zero(n, n);
  dm.rank = 0;
  for (int k = 0; k < n; ++k) {
    if (eigvals_desc(k) > tol_rank * lmax) {
      dm.support += eigvecs.col(k) * eigvecs.col(k).adjoint();
      ++dm.rank;
    }
  }
  return dm;
}

DensityMatrix validate_density(const Matrix& m, double tol_rank) {
  if (m.rows() != m.cols()) {
    throw NotDensityError("not square");
  }
  if (!is_hermitian(m)) {
    std::ostringstream os;
    os << "not Hermitian: ||M - M*||_max = "
       << (m - m.adjoint()).cwiseAbs().maxCoeff();
    throw NotDensityError(os.str());
  }
  EigenSystem es = hermitian_eig(m);
  const double lmax = std::max(es.eigvals(0), 0.0);
  // Dust clamping is tied to the validation drift tolerance; the stricter
  // rank threshold only decides the support.
  const double floor =
      -std::max(tol_rank * (lmax > 0 ? lmax : 1.0), tol::trace_drift);
  RealVector clamped = es.eigvals;
  for (int k = 0; k < clamped.size(); ++k) {
    if (clamped(k) < floor) {
      std::ostringstream os;
      os << "negative eigenvalue " << clamped(k) << " below threshold "
         << floor;
      throw NotDensityError(os.str());
    }
    clamped(k) = std::max(clamped(k), 0.0);
  }
  const double tr = clamped.sum();
  if (std::abs(tr - 1.0) > tol::trace_drift) {
    std::ostringstream os;
    os << "trace = " << tr << " differs from 1 by " << std::abs(tr - 1.0);
    throw NotDensityError(os.str());
  }
  if (tr > 0) clamped /= tr;
  return density_from_eigen(clamped, es.eigvecs, tol_rank);
}

bool support_leq(const Matrix& p, const Matrix& q, double tolerance) {
  require_same_dim(p, q);
  return (p - q * p).norm() <= tolerance;
}

}  // namespace bures
