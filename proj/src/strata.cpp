#include "bures/strata.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

#include "bures/fidelity.hpp"
#include "bures/geodesics.hpp"

namespace bures {

BlockPartition spectral_partition(const DensityMatrix& mu,
                                  double degeneracy_tol) {
  const double lmax = mu.eigvals.size() ? mu.eigvals(0) : 0.0;
  const double gap = degeneracy_tol * (lmax > 0 ? lmax : 1.0);
  BlockPartition out;
  const int n = mu.dim();
  int start = 0;
  while (start < n) {
    int stop = start + 1;
    while (stop < n && mu.eigvals(stop - 1) - mu.eigvals(stop) <= gap) ++stop;
    Matrix block = Matrix::Zero(n, n);
    for (int k = start; k < stop; ++k) {
      block += mu.eigvecs.col(k) * mu.eigvecs.col(k).adjoint();
    }
    out.projectors.push_back(std::move(block));
    start = stop;
  }
  return out;
}

Matrix conditional_expectation(const Matrix& x, const BlockPartition& p) {
  if (p.projectors.empty()) {
    throw NotADecompositionError("empty block partition");
  }
  require_same_dim(x, p.projectors[0]);
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (const Matrix& block : p.projectors) {
    out += block * x * block;
  }
  return out;
}

bool leaf_membership(const DensityMatrix& rho, const DensityMatrix& mu) {
  require_same_dim(rho.matrix, mu.matrix);
  if (!rho.full_rank()) return false;
  const bool commutes =
      (rho.matrix * mu.matrix - mu.matrix * rho.matrix).norm() <=
      tol::support_cmp;
  const BlockPartition blocks = spectral_partition(mu);
  const bool fixed_point =
      (conditional_expectation(rho.matrix, blocks) - rho.matrix).norm() <=
      tol::support_cmp;
  return commutes && fixed_point;
}

LeafConvexityReport leaf_convexity_check(const DensityMatrix& rho,
                                         const DensityMatrix& nu,
                                         const DensityMatrix& mu,
                                         int grid) {
  if (!leaf_membership(rho, mu) || !leaf_membership(nu, mu)) {
    throw NotInLeafError("endpoint outside the mu-leaf");
  }
  const GeodesicArc arc = geodesic_arc(nu, rho);
  LeafConvexityReport report;
  report.arc_is_unique = arc_unique(nu, rho);
  grid = std::max(grid, 2);
  for (int j = 0; j < grid; ++j) {
    const double t = static_cast<double>(j) / (grid - 1);
    const DensityMatrix sample = eval_t(arc, t);
    report.max_commutator = std::max(
        report.max_commutator,
        (sample.matrix * mu.matrix - mu.matrix * sample.matrix).norm());
    report.min_eigenvalue =
        std::min(report.min_eigenvalue, sample.eigvals(sample.dim() - 1));
  }
  report.pass = report.arc_is_unique &&
                report.max_commutator <= tol::support_cmp &&
                report.min_eigenvalue > tol::rank_rel;
  return report;
}

MinimalDecomposition minimal_decomposition(const DensityMatrix& rho,
                                           const std::vector<Vector>& basis) {
  if (!rho.full_rank()) {
    throw NotFullRankError("minimal decomposition needs a full-rank state");
  }
  const int n = rho.dim();
  if (static_cast<int>(basis.size()) != n) {
    throw BasisIncompleteError("basis size differs from the dimension");
  }
  Matrix gram(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      gram(j, k) = basis[j].dot(basis[k]);  // conj(basis_j) . basis_k
    }
  }
  if ((gram - Matrix::Identity(n, n)).norm() > 1e-9) {
    throw BasisIncompleteError("vectors are not an orthonormal basis");
  }
  const Matrix root = sqrt_psd(rho.matrix);
  MinimalDecomposition out;
  out.weights.resize(n);
  out.vectors.resize(n);
  for (int k = 0; k < n; ++k) {
    Vector image = root * basis[k];
    const double norm = image.norm();
    out.weights[k] = norm * norm;
    out.vectors[k] = image / norm;
  }
  return out;
}

double max_subtraction(const Matrix& lambda_op, const Vector& psi) {
  require_hermitian(lambda_op);
  if (psi.size() != lambda_op.rows()) {
    throw DimMismatchError("vector length differs from the matrix dimension");
  }
  const EigenSystem es = hermitian_eig(lambda_op);
  const double lmin = es.eigvals(es.eigvals.size() - 1);
  if (lmin <= tol::rank_rel * std::max(es.eigvals(0), 0.0)) {
    throw NotFullRankError("max_subtraction needs a full-rank positive matrix");
  }
  const Vector unit = psi / psi.norm();
  const Matrix inverse =
      es.eigvecs * es.eigvals.cwiseInverse().asDiagonal() * es.eigvecs.adjoint();
  return 1.0 / (unit.adjoint() * inverse * unit)(0).real();
}

DensityMatrix intermediate_faithfulness_witness(const DensityMatrix& nu,
                                                const DensityMatrix& rho) {
  if (!nu.full_rank() || !rho.full_rank()) {
    throw NotFullRankError("witness construction needs full-rank inputs");
  }
  const AlignedPair pair = aligned_pair(nu, rho);
  const Matrix x = pair.zeta + pair.phi;
  Matrix omega = x * x.adjoint();
  omega /= omega.trace().real();
  return validate_density(0.5 * (omega + omega.adjoint()));
}

}  // namespace bures
