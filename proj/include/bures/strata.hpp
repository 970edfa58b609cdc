#ifndef BURES_STRATA_HPP
#define BURES_STRATA_HPP

#include <vector>

#include "bures/operator_core.hpp"

namespace bures {

/// Mutually orthogonal projectors summing to the identity, e.g. spectral
/// blocks of a state grouped by eigenvalue.
struct BlockPartition {
  std::vector<Matrix> projectors;

  int dim() const {
    return projectors.empty() ? 0 : static_cast<int>(projectors[0].rows());
  }
};

/// Groups eigenvalues within degeneracy_tol * lambda_max into blocks,
/// ordered by descending eigenvalue.
BlockPartition spectral_partition(const DensityMatrix& mu,
                                  double degeneracy_tol = 1e-9);

/// Phi(x) = sum_k P_k x P_k; unital, trace-preserving, idempotent, positive.
Matrix conditional_expectation(const Matrix& x, const BlockPartition& p);

/// rho belongs to the mu-leaf: full rank and commuting with mu. The block
/// form Phi_mu(rho) = rho is cross-checked against the commutator test.
bool leaf_membership(const DensityMatrix& rho, const DensityMatrix& mu);

struct LeafConvexityReport {
  double max_commutator = 0.0;   // max over samples of ||[nu_t, mu]||_F
  double min_eigenvalue = 1.0;   // min over samples of the smallest eigenvalue
  bool arc_is_unique = false;
  bool pass = false;
};

/// Samples the geodesic arc between two leaf members and checks every sample
/// stays in the leaf (commutes with mu, full rank). Throws NotInLeafError if
/// an endpoint is outside the leaf.
LeafConvexityReport leaf_convexity_check(const DensityMatrix& rho,
                                         const DensityMatrix& nu,
                                         const DensityMatrix& mu,
                                         int grid = 65);

/// Convex rank-one decomposition rho = sum_k lambda_k |psi_k><psi_k| indexed
/// by an orthonormal basis {eta_k}: psi_k = sqrt(rho) eta_k normalized,
/// lambda_k = ||sqrt(rho) eta_k||^2. No term is redundant for the support.
struct MinimalDecomposition {
  std::vector<double> weights;
  std::vector<Vector> vectors;
};

MinimalDecomposition minimal_decomposition(const DensityMatrix& rho,
                                           const std::vector<Vector>& basis);

/// Largest lambda with Lambda - lambda |psi><psi| still psd, for full-rank
/// psd Lambda: lambda0 = 1 / <Lambda^-1 psi, psi>.
double max_subtraction(const Matrix& lambda_op, const Vector& psi);

/// Full-rank state proportional to x x* with x = zeta + phi from the aligned
/// pair; the midpoint-type witness that full-rank pairs stay full rank.
DensityMatrix intermediate_faithfulness_witness(const DensityMatrix& nu,
                                                const DensityMatrix& rho);

}  // namespace bures

#endif  // BURES_STRATA_HPP
