#ifndef BURES_CURVES_HPP
#define BURES_CURVES_HPP

#include <functional>
#include <vector>

#include "bures/geodesics.hpp"
#include "bures/operator_core.hpp"
#include "bures/tangent_metric.hpp"

namespace bures {

/// A parameterized curve of states on [t0, t1]. `implementation_at`, when
/// set, supplies Hilbert-Schmidt vectors c_t with c_t c_t* = state_at(t).
/// Both callables must be pure (same t, same value).
struct CurveProvider {
  double t0 = 0.0;
  double t1 = 1.0;
  std::function<DensityMatrix(double)> state_at;
  std::function<Matrix(double)> implementation_at;

  bool has_implementation() const {
    return static_cast<bool>(implementation_at);
  }
};

/// Finite-difference ladder for dilation estimates: steps step0 * ratio^k,
/// k = 0..rungs-1, Richardson-extrapolated to step 0.
struct DilationOptions {
  double step0 = 1e-2;
  double ratio = 0.5;
  int rungs = 6;
};

struct DilationEstimate {
  double value = 0.0;
  double error = 0.0;  // spread of the last two extrapolants
};

/// Local dilation at an interior point: max of the two one-sided
/// Richardson-extrapolated difference quotients of the Bures distance.
/// Throws BoundaryPointError at the interval endpoints.
DilationEstimate local_dilation(const CurveProvider& curve, double t,
                                const DilationOptions& opts = {});

struct LengthEstimates {
  double quadrature = 0.0;     // integral of the local dilation
  double partition_sum = 0.0;  // refined partition sums of d_B
};

/// Bures length by both estimators. `refinements` dyadic halvings bound the
/// partition estimator; quadrature uses `nodes`-point Gauss-Legendre panels.
LengthEstimates bures_length(const CurveProvider& curve, int nodes = 33,
                             int panels = 4, int refinements = 10,
                             const DilationOptions& opts = {});

struct CurveDiagnostics {
  double t = 0.0;
  double dil = 0.0;
  double dil_error = 0.0;
  double tangent_norm_val = 0.0;
  double invariant = 0.0;  // I = ||(1-s_L) psi (1-s_R)||_HS
  double pyth_residual = 0.0;  // dil^2 - ||f||^2 - I^2
  bool finslerian = false;
};

struct FiniteDifferenceOptions {
  double step = 1e-5;
  // Quotients at step and step/2 must agree to this relative tolerance,
  // otherwise the curve counts as not differentiable at the point.
  double stabilization = 1e-3;
};

/// Evaluates the Pythagorean decomposition dil^2 = ||f||^2 + I^2 at an
/// interior point of an implemented curve.
CurveDiagnostics pythagoras(const CurveProvider& curve, double t,
                            const DilationOptions& dil_opts = {},
                            const FiniteDifferenceOptions& fd_opts = {});

/// True iff the off-support invariant vanishes (I <= tol::finsler); when it
/// does, dilation and tangent norm are additionally required to agree.
bool finslerian_check(const CurveProvider& curve, double t,
                      const DilationOptions& dil_opts = {},
                      const FiniteDifferenceOptions& fd_opts = {});

/// rho_t = exp(-iht) rho0 exp(iht) with implementation exp(-iht) sqrt(rho0).
CurveProvider hamiltonian_curve(const DensityMatrix& rho0, const Matrix& h,
                                double t0 = 0.0, double t1 = 1.0);

/// Curve defined by an implementation map c: state_at(t) = c_t c_t*.
/// Trace drift up to tol::trace_drift is renormalized; anything worse is
/// NotAStateError.
CurveProvider hs_curve(std::function<Matrix(double)> c, double t0, double t1);

/// The arc as a curve on [-1, 1] (the construction extends past t = 0).
CurveProvider geodesic_curve(const GeodesicArc& arc);

/// Canonical curve of a tangent form as a provider on [-1, 1].
CurveProvider curve_from_canonical(const CanonicalCurve& canonical);

/// Piecewise-linear interpolation through state samples (convex
/// combinations stay states). No implementation attached.
CurveProvider sampled_state_curve(const std::vector<double>& ts,
                                  const std::vector<DensityMatrix>& states);

/// Piecewise-linear interpolation of implementation samples; states are the
/// induced c_t c_t*.
CurveProvider sampled_implementation_curve(const std::vector<double>& ts,
                                           const std::vector<Matrix>& impls);

}  // namespace bures

#endif  // BURES_CURVES_HPP
