#include "bures/curves.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bures/quadrature.hpp"

namespace bures {

namespace {

// Fidelity evaluates to ~1e-13 absolute accuracy, so Bures distances below
// sqrt of that are indistinguishable from zero; quotients of such distances
// are pure noise and are treated as zero.
constexpr double kDistanceNoise = 1e-6;

// Polynomial extrapolation of (steps, values) to step -> 0 (Neville tableau).
// Returns the last two diagonal entries.
std::pair<double, double> richardson(const std::vector<double>& steps,
                                     const std::vector<double>& values) {
  const int n = static_cast<int>(values.size());
  std::vector<double> tableau = values;
  double previous = values.back();
  for (int m = 1; m < n; ++m) {
    for (int k = n - 1; k >= m; --k) {
      const double ratio = steps[k - m] / steps[k];
      tableau[k] = tableau[k] + (tableau[k] - tableau[k - 1]) / (ratio - 1.0);
    }
    if (m == n - 2) previous = tableau[n - 1];
  }
  return {tableau[n - 1], previous};
}

double one_sided_quotients(const CurveProvider& curve, double t, int sign,
                           const DilationOptions& opts, double* error) {
  const DensityMatrix center = curve.state_at(t);
  std::vector<double> steps, values;
  double h = opts.step0;
  for (int k = 0; k < opts.rungs; ++k) {
    const double tk = t + sign * h;
    const double d = bures_distance(curve.state_at(tk), center);
    values.push_back(d <= kDistanceNoise ? 0.0 : d / h);
    steps.push_back(h);
    h *= opts.ratio;
  }
  auto [extrapolated, previous] = richardson(steps, values);
  if (error) *error = std::abs(extrapolated - previous);
  return extrapolated;
}

Matrix central_difference(const CurveProvider& curve, double t,
                          const FiniteDifferenceOptions& opts) {
  if (!curve.has_implementation()) {
    throw NoImplementationError("curve carries no implementation");
  }
  const double h = opts.step;
  auto quotient = [&](double step) {
    return ((curve.implementation_at(t + step) -
             curve.implementation_at(t - step)) /
            (2.0 * step))
        .eval();
  };
  const Matrix coarse = quotient(h);
  const Matrix fine = quotient(0.5 * h);
  if ((coarse - fine).norm() > opts.stabilization * (1.0 + fine.norm())) {
    throw NotDifferentiableError(
        "implementation difference quotients fail to stabilize");
  }
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace

DilationEstimate local_dilation(const CurveProvider& curve, double t,
                                const DilationOptions& opts) {
  if (t <= curve.t0 || t >= curve.t1) {
    throw BoundaryPointError("dilation needs two-sided increments");
  }
  DilationOptions local = opts;
  local.step0 = std::min(opts.step0,
                         0.5 * std::min(t - curve.t0, curve.t1 - t));
  double err_plus = 0.0, err_minus = 0.0;
  const double plus = one_sided_quotients(curve, t, +1, local, &err_plus);
  const double minus = one_sided_quotients(curve, t, -1, local, &err_minus);
  return DilationEstimate{std::max(plus, minus),
                          std::max(err_plus, err_minus)};
}

LengthEstimates bures_length(const CurveProvider& curve, int nodes, int panels,
                             int refinements, const DilationOptions& opts) {
  LengthEstimates out;
  out.quadrature = integrate(
      [&](double s) { return local_dilation(curve, s, opts).value; }, curve.t0,
      curve.t1, nodes, panels);

  auto segment = [](const DensityMatrix& a, const DensityMatrix& b) {
    const double d = bures_distance(a, b);
    return d <= kDistanceNoise ? 0.0 : d;
  };
  double previous = segment(curve.state_at(curve.t0),
                            curve.state_at(curve.t1));
  out.partition_sum = previous;
  for (int level = 1; level <= refinements; ++level) {
    const int segments = 1 << level;
    double sum = 0.0;
    DensityMatrix left = curve.state_at(curve.t0);
    for (int j = 1; j <= segments; ++j) {
      const double tj =
          curve.t0 + (curve.t1 - curve.t0) * static_cast<double>(j) / segments;
      DensityMatrix right = curve.state_at(tj);
      sum += segment(left, right);
      left = std::move(right);
    }
    out.partition_sum = std::max(out.partition_sum, sum);
    if (sum - previous < 1e-8 && level >= 4) break;
    previous = sum;
  }
  return out;
}

CurveDiagnostics pythagoras(const CurveProvider& curve, double t,
                            const DilationOptions& dil_opts,
                            const FiniteDifferenceOptions& fd_opts) {
  if (!curve.has_implementation()) {
    throw NoImplementationError("pythagoras needs an implementation");
  }
  const Matrix phi = curve.implementation_at(t);
  const Matrix psi = central_difference(curve, t, fd_opts);
  const DensityMatrix rho = validate_density(phi * phi.adjoint());
  const int n = rho.dim();
  const Matrix left = Matrix::Identity(n, n) - rho.support;
  const Matrix right =
      Matrix::Identity(n, n) - support_projector(phi.adjoint() * phi);

  Matrix t_matrix = psi * phi.adjoint() + phi * psi.adjoint();
  t_matrix = 0.5 * (t_matrix + t_matrix.adjoint());
  // The kernel-kernel block is zero in exact arithmetic ((1-s)phi = 0);
  // what shows up there is square-root dust from the state reconstruction,
  // so it is compressed away before the support-block solve. The same goes
  // for the trace, whose exact value is the derivative of tr(rho_t) = 1.
  t_matrix -= left * t_matrix * left;
  t_matrix -= (t_matrix.trace().real() / rho.rank) * rho.support;
  const TangentForm form = validate_tangent_form(rho, t_matrix);

  CurveDiagnostics diag;
  diag.t = t;
  const DilationEstimate dil = local_dilation(curve, t, dil_opts);
  diag.dil = dil.value;
  diag.dil_error = dil.error;
  diag.tangent_norm_val = tangent_norm(rho, form);
  diag.invariant = hs_norm(left * psi * right);
  diag.pyth_residual = diag.dil * diag.dil -
                       diag.tangent_norm_val * diag.tangent_norm_val -
                       diag.invariant * diag.invariant;
  diag.finslerian = diag.invariant <= tol::finsler;
  return diag;
}

bool finslerian_check(const CurveProvider& curve, double t,
                      const DilationOptions& dil_opts,
                      const FiniteDifferenceOptions& fd_opts) {
  const CurveDiagnostics diag = pythagoras(curve, t, dil_opts, fd_opts);
  if (!diag.finslerian) return false;
  if (std::abs(diag.dil - diag.tangent_norm_val) > 1e-4) {
    std::ostringstream os;
    os << "Finslerian point with dilation " << diag.dil
       << " != tangent norm " << diag.tangent_norm_val;
    throw Error("FinslerViolation", os.str());
  }
  return true;
}

CurveProvider hamiltonian_curve(const DensityMatrix& rho0, const Matrix& h,
                                double t0, double t1) {
  require_same_dim(rho0.matrix, h);
  require_hermitian(h);
  const EigenSystem es = hermitian_eig(h);
  const Matrix sqrt_rho0 = sqrt_psd(rho0.matrix);
  auto evolution = [es](double t) {
    Vector phases(es.dim());
    for (int k = 0; k < es.dim(); ++k) {
      phases(k) = std::exp(Complex(0.0, -es.eigvals(k) * t));
    }
    return (es.eigvecs * phases.asDiagonal() * es.eigvecs.adjoint()).eval();
  };
  CurveProvider curve;
  curve.t0 = t0;
  curve.t1 = t1;
  curve.state_at = [evolution, rho0](double t) {
    const Matrix u = evolution(t);
    return validate_density(u * rho0.matrix * u.adjoint());
  };
  curve.implementation_at = [evolution, sqrt_rho0](double t) {
    return (evolution(t) * sqrt_rho0).eval();
  };
  return curve;
}

CurveProvider hs_curve(std::function<Matrix(double)> c, double t0, double t1) {
  CurveProvider curve;
  curve.t0 = t0;
  curve.t1 = t1;
  curve.implementation_at = c;
  curve.state_at = [c](double t) {
    const Matrix m = c(t);
    try {
      return validate_density(m * m.adjoint());
    } catch (const NotDensityError& e) {
      throw NotAStateError(e.what());
    }
  };
  return curve;
}

CurveProvider geodesic_curve(const GeodesicArc& arc) {
  CurveProvider curve;
  curve.t0 = -1.0;
  curve.t1 = 1.0;
  curve.state_at = [arc](double t) { return eval_t_extended(arc, t); };
  curve.implementation_at = [arc](double t) {
    return implementation_t(arc, t);
  };
  return curve;
}

CurveProvider curve_from_canonical(const CanonicalCurve& canonical) {
  CurveProvider curve;
  curve.t0 = -1.0;
  curve.t1 = 1.0;
  curve.state_at = [canonical](double t) { return canonical.at(t); };
  curve.implementation_at = [canonical](double t) {
    return canonical.implementation(t);
  };
  return curve;
}

namespace {

int locate_segment(const std::vector<double>& ts, double t) {
  if (ts.size() < 2) {
    throw ParamOutOfRangeError("sampled curve needs at least two samples");
  }
  if (t < ts.front() - 1e-12 || t > ts.back() + 1e-12) {
    throw ParamOutOfRangeError("parameter outside the sampled range");
  }
  int j = static_cast<int>(std::upper_bound(ts.begin(), ts.end(), t) -
                           ts.begin()) -
          1;
  return std::clamp(j, 0, static_cast<int>(ts.size()) - 2);
}

}  // namespace

CurveProvider sampled_state_curve(const std::vector<double>& ts,
                                  const std::vector<DensityMatrix>& states) {
  if (ts.size() != states.size() || ts.size() < 2) {
    throw ParamOutOfRangeError("sample counts do not line up");
  }
  CurveProvider curve;
  curve.t0 = ts.front();
  curve.t1 = ts.back();
  curve.state_at = [ts, states](double t) {
    const int j = locate_segment(ts, t);
    const double w = (t - ts[j]) / (ts[j + 1] - ts[j]);
    return validate_density((1.0 - w) * states[j].matrix +
                            w * states[j + 1].matrix);
  };
  return curve;
}

CurveProvider sampled_implementation_curve(const std::vector<double>& ts,
                                           const std::vector<Matrix>& impls) {
  if (ts.size() != impls.size() || ts.size() < 2) {
    throw ParamOutOfRangeError("sample counts do not line up");
  }
  auto c = [ts, impls](double t) {
    const int j = locate_segment(ts, t);
    const double w = (t - ts[j]) / (ts[j + 1] - ts[j]);
    return ((1.0 - w) * impls[j] + w * impls[j + 1]).eval();
  };
  return hs_curve(c, ts.front(), ts.back());
}

}  // namespace bures
