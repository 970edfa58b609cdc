#ifndef BURES_OPERATOR_CORE_HPP
#define BURES_OPERATOR_CORE_HPP

#include "bures/types.hpp"

namespace bures {

/// Spectral data of a Hermitian matrix, eigenvalues in descending order,
/// eigenvectors as orthonormal columns in matching order.
struct EigenSystem {
  RealVector eigvals;
  Matrix eigvecs;

  int dim() const { return static_cast<int>(eigvals.size()); }
  /// Rank-one projector onto the k-th eigenvector.
  Matrix projector(int k) const {
    return eigvecs.col(k) * eigvecs.col(k).adjoint();
  }
};

/// Polar decomposition A = u|A| with u a partial isometry (u*u = support|A|)
/// and `unitary_completion` a full unitary agreeing with u on support|A|.
/// Kernel/cokernel bases are paired in stable index order.
struct PolarFactors {
  Matrix partial_isometry;   // u
  Matrix modulus;            // |A| = sqrt(A*A)
  Matrix unitary_completion; // U, unitary, U|support = u
};

/// Positive semidefinite, trace-one Hermitian matrix with cached eigendata.
/// Construct through validate_density(); all members stay consistent:
/// matrix = eigvecs * diag(eigvals) * eigvecs^*, eigvals descending and
/// clamped to [0, 1], support = projector onto eigenvalues > tol * lambda_max.
struct DensityMatrix {
  Matrix matrix;
  RealVector eigvals;
  Matrix eigvecs;
  Matrix support;
  int rank = 0;

  int dim() const { return static_cast<int>(matrix.rows()); }
  bool full_rank() const { return rank == dim(); }
};

bool is_hermitian(const Matrix& a, double tolerance = tol::herm_sym);
void require_hermitian(const Matrix& a, double tolerance = tol::herm_sym);
void require_square(const Matrix& a);
void require_same_dim(const Matrix& a, const Matrix& b);

/// Eigendecomposition of a Hermitian matrix, descending eigenvalues.
EigenSystem hermitian_eig(const Matrix& a);

/// Principal square root of a psd Hermitian matrix. Eigenvalue dust down to
/// -tol_rank * lambda_max is clamped to zero; anything below is an error.
Matrix sqrt_psd(const Matrix& a, double tol_rank = tol::rank_rel);

/// Operator absolute value |A| = sqrt(A*A) of a square matrix.
Matrix abs_op(const Matrix& a);

/// Polar decomposition with unitary completion (see PolarFactors).
PolarFactors polar(const Matrix& a);

/// Orthoprojector onto the span of eigenvectors with eigenvalue
/// > tol_rank * lambda_max.
Matrix support_projector(const Matrix& psd, double tol_rank = tol::rank_rel);

/// Support at an absolute eigenvalue cut. For unit-scale objects (moduli of
/// products of square roots of states, commutant forms) whose own lambda_max
/// may be nothing but rounding noise, a purely relative threshold would keep
/// that noise; these callers cut at tol::rank_rel absolutely.
Matrix support_projector_at(const Matrix& psd, double cut = tol::rank_rel);

/// Sum of singular values.
double trace_norm(const Matrix& a);

/// Hilbert-Schmidt inner product <b,a> = tr(b a*); here hs_inner(a, b) = tr(a b*).
Complex hs_inner(const Matrix& a, const Matrix& b);

double hs_norm(const Matrix& a);

/// Checks Hermiticity, positivity up to clamping, trace 1 up to
/// tol::trace_drift (renormalized), and returns the value with cached
/// eigendata. Throws NotDensityError naming the violated invariant.
DensityMatrix validate_density(const Matrix& m, double tol_rank = tol::rank_rel);

/// Density matrix from already-validated spectral data (trusted internal path;
/// eigvals must be nonnegative, summing to one, descending).
DensityMatrix density_from_eigen(const RealVector& eigvals_desc,
                                 const Matrix& eigvecs,
                                 double tol_rank = tol::rank_rel);

/// True iff P <= Q as projectors: ||P - Q P||_F <= tolerance.
bool support_leq(const Matrix& p, const Matrix& q,
                 double tolerance = tol::support_cmp);

}  // namespace bures

#endif  // BURES_OPERATOR_CORE_HPP
