#ifndef BURES_TYPES_HPP
#define BURES_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bures {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace tol {
// Relative rank threshold: eigenvalues below rank_rel * lambda_max count as zero.
inline constexpr double rank_rel = 1e-12;
// Hermiticity check: ||A - A*||_max <= herm_sym * (1 + ||A||_max).
inline constexpr double herm_sym = 1e-12;
// Trace-1 drift accepted (and silently renormalized) for density matrices.
inline constexpr double trace_drift = 1e-10;
// Support comparisons (inclusion/equality of projectors).
inline constexpr double support_cmp = 1e-9;
// Decompositions of the identity must close to within this.
inline constexpr double decomposition_closure = 1e-9;
// Off-support invariant I below this counts as Finslerian.
inline constexpr double finsler = 1e-6;
}  // namespace tol

// Base of all library errors. `code` is a stable machine-readable tag
// mirrored by the CLI in error JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define BURES_DEFINE_ERROR(Name, Code)                       \
  class Name : public Error {                                \
   public:                                                   \
    explicit Name(const std::string& what) : Error(Code, what) {} \
  }

BURES_DEFINE_ERROR(NonHermitianError, "NonHermitian");
BURES_DEFINE_ERROR(NotPsdError, "NotPSD");
BURES_DEFINE_ERROR(NotDensityError, "NotDensity");
BURES_DEFINE_ERROR(DimMismatchError, "DimMismatch");
BURES_DEFINE_ERROR(ShapeMismatchError, "ShapeMismatch");
BURES_DEFINE_ERROR(NotADecompositionError, "NotADecomposition");
BURES_DEFINE_ERROR(ParamOutOfRangeError, "ParamOutOfRange");
BURES_DEFINE_ERROR(DegenerateEndpointsError, "DegenerateEndpoints");
BURES_DEFINE_ERROR(NotInTangentSpaceError, "NotInTangentSpace");
BURES_DEFINE_ERROR(NotFullRankError, "NotFullRank");
BURES_DEFINE_ERROR(BasisIncompleteError, "BasisIncomplete");
BURES_DEFINE_ERROR(NoImplementationError, "NoImplementation");
BURES_DEFINE_ERROR(NotDifferentiableError, "NotDifferentiable");
BURES_DEFINE_ERROR(NotInLeafError, "NotInLeaf");
BURES_DEFINE_ERROR(NotAStateError, "NotAState");
BURES_DEFINE_ERROR(BoundaryPointError, "BoundaryPoint");

#undef BURES_DEFINE_ERROR

}  // namespace bures

#endif  // BURES_TYPES_HPP
