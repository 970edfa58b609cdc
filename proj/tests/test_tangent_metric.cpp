#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

#include <cmath>

#include "bures/tangent_metric.hpp"

using namespace bures;
using testsup::diag_state;
using testsup::identity;

namespace {

TangentForm traceless(const DensityMatrix& base, const Matrix& raw) {
  Matrix t = 0.5 * (raw + raw.adjoint());
  t -= (t.trace().real() / base.rank) * base.support;
  return validate_tangent_form(base, t);
}

}  // namespace

TEST_CASE("tangent-space membership") {
  const DensityMatrix full = buresgen::full_rank_state(3, 1);
  const DensityMatrix deficient = buresgen::rank_r_state(4, 2, 2);

  CHECK(in_tangent_space(full, buresgen::tangent_at(full, 3).matrix));
  CHECK(in_tangent_space(deficient, buresgen::tangent_at(deficient, 4).matrix));

  // Not traceless: rejected.
  CHECK_THROWS_AS(validate_tangent_form(full, identity(3)),
                  NotInTangentSpaceError);

  // Off-support block present: rejected at a rank-deficient base.
  Matrix block = Matrix::Zero(4, 4);
  block(3, 3) = 1.0;
  block(0, 0) = -1.0;
  const Matrix basis_block =
      deficient.eigvecs * block * deficient.eigvecs.adjoint();
  CHECK_THROWS_AS(validate_tangent_form(deficient, basis_block),
                  NotInTangentSpaceError);
}

TEST_CASE("lyapunov_solve closed forms") {
  const DensityMatrix half = diag_state({0.5, 0.5});
  Matrix t = Matrix::Zero(2, 2);
  t(0, 0) = 0.3;
  t(1, 1) = -0.3;
  t(0, 1) = Complex(0.1, 0.05);
  t(1, 0) = std::conj(t(0, 1));
  const TangentForm form = validate_tangent_form(half, t);
  CHECK((lyapunov_solve(half, form) - t).norm() <= 1e-12);

  // Diagonal case: entrywise division.
  const DensityMatrix diag = diag_state({0.75, 0.25});
  const TangentForm form2 = validate_tangent_form(diag, t);
  const Matrix x = lyapunov_solve(diag, form2);
  CHECK(x(0, 0).real() == doctest::Approx(0.3 / 1.5));
  CHECK(x(1, 1).real() == doctest::Approx(-0.3 / 0.5));
  CHECK(x(0, 1).real() == doctest::Approx(0.1));
  CHECK(x(0, 1).imag() == doctest::Approx(0.05));
}

TEST_CASE("lyapunov residual vanishes on the support") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int dim = 2 + static_cast<int>(seed % 7);
    const DensityMatrix rho = buresgen::full_rank_state(dim, 100 + seed);
    const TangentForm t = buresgen::tangent_at(rho, 200 + seed);
    const Matrix x = lyapunov_solve(rho, t);
    CHECK(is_hermitian(x, 1e-10));
    CHECK((x * rho.matrix + rho.matrix * x - t.matrix).norm() <= 1e-10);
  }
  // Rank-deficient base: residual vanishes after support compression.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DensityMatrix rho = buresgen::rank_r_state(5, 3, 300 + seed);
    const TangentForm t = buresgen::tangent_at(rho, 400 + seed);
    const Matrix x = lyapunov_solve(rho, t);
    const Matrix residual = x * rho.matrix + rho.matrix * x - t.matrix;
    CHECK((rho.support * residual * rho.support).norm() <= 1e-10);
  }
}

TEST_CASE("lyapunov integral route agrees with the spectral route") {
  const DensityMatrix half = diag_state({0.5, 0.5});
  Matrix t = Matrix::Zero(2, 2);
  t(0, 1) = 0.2;
  t(1, 0) = 0.2;
  const TangentForm form = validate_tangent_form(half, t);
  CHECK((lyapunov_integral(half, form) - t).norm() <= 1e-8);

  const DensityMatrix diag = diag_state({0.75, 0.25});
  Matrix sigma_x = Matrix::Zero(2, 2);
  sigma_x(0, 1) = 0.1;
  sigma_x(1, 0) = 0.1;
  const TangentForm form2 = validate_tangent_form(diag, sigma_x);
  CHECK((lyapunov_integral(diag, form2) - lyapunov_solve(diag, form2)).norm() <=
        1e-6);

  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const int dim = 2 + static_cast<int>(seed % 7);  // dims up to 8
    const DensityMatrix rho = buresgen::full_rank_state(dim, 500 + seed);
    const TangentForm form3 = buresgen::tangent_at(rho, 600 + seed);
    CHECK((lyapunov_integral(rho, form3) - lyapunov_solve(rho, form3)).norm() <=
          1e-6);
  }
}

TEST_CASE("psi0 reconstruction and orthogonality") {
  const DensityMatrix half = diag_state({0.5, 0.5});
  const Matrix zero = Matrix::Zero(2, 2);
  CHECK(psi0(half, TangentForm{zero}).norm() <= 1e-14);

  Matrix t = Matrix::Zero(2, 2);
  t(0, 0) = 0.4;
  t(1, 1) = -0.4;
  const TangentForm form = validate_tangent_form(half, t);
  CHECK((psi0(half, form) - t / std::sqrt(2.0)).norm() <= 1e-12);

  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int dim = 2 + static_cast<int>(seed % 6);
    const int rank = 1 + static_cast<int>(seed % dim);
    const DensityMatrix rho =
        rank == dim ? buresgen::full_rank_state(dim, 700 + seed)
                    : buresgen::rank_r_state(dim, rank, 700 + seed);
    const TangentForm form2 = buresgen::tangent_at(rho, 800 + seed);
    const Matrix p = psi0(rho, form2);
    const Matrix root = sqrt_psd(rho.matrix);
    CHECK((p * root + root * p.adjoint() - form2.matrix).norm() <= 1e-10);
    CHECK(std::abs(hs_inner(p, root).real()) <= 1e-10);
  }
}

TEST_CASE("psi0 keeps the kernel-row entries") {
  // Rank-1 base diag(1, 0); T with support-kernel coupling.
  const DensityMatrix rho = diag_state({1, 0});
  Matrix t = Matrix::Zero(2, 2);
  t(0, 1) = Complex(0.2, -0.1);
  t(1, 0) = std::conj(t(0, 1));
  const TangentForm form = validate_tangent_form(rho, t);
  const Matrix p = psi0(rho, form);
  // Column with lambda_k = 1 keeps sqrt(1)/(0+1) = 1 on the kernel row.
  CHECK(std::abs(p(1, 0) - t(1, 0)) <= 1e-14);
  CHECK(std::abs(p(0, 1)) <= 1e-14);  // kernel column vanishes
  // Equation still closes.
  const Matrix root = sqrt_psd(rho.matrix);
  CHECK((p * root + root * p.adjoint() - t).norm() <= 1e-12);
}

TEST_CASE("tangent norm routes agree") {
  const DensityMatrix half = diag_state({0.5, 0.5});
  Matrix t = Matrix::Zero(2, 2);
  t(0, 0) = 0.5;
  t(1, 1) = -0.5;
  const TangentForm form = validate_tangent_form(half, t);
  CHECK(tangent_norm(half, form) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ds2_leaf(half, form) == doctest::Approx(0.25).epsilon(1e-12));

  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int dim = 2 + static_cast<int>(seed % 15);
    const DensityMatrix rho = buresgen::full_rank_state(dim, 900 + seed);
    const TangentForm form2 = buresgen::tangent_at(rho, 1000 + seed);
    const TangentNormRoutes routes = tangent_norm_routes(rho, form2);
    CHECK(std::abs(routes.huebner - routes.psi0_norm) <= 1e-10);
    REQUIRE(routes.has_ds_leaf);
    CHECK(std::abs(routes.huebner - routes.ds_leaf) <= 1e-10);
  }
}

TEST_CASE("qubit leaf length element") {
  for (double lambda : {0.1, 0.35, 0.6}) {
    const DensityMatrix rho = diag_state({lambda, 1 - lambda});
    const double eps = 0.05;
    Matrix t = Matrix::Zero(2, 2);
    t(0, 0) = eps;
    t(1, 1) = -eps;
    const TangentForm form = validate_tangent_form(rho, t);
    const double expected =
        eps * eps / 4.0 * (1.0 / lambda + 1.0 / (1.0 - lambda));
    CHECK(ds2_leaf(rho, form) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(std::pow(tangent_norm(rho, form), 2) ==
          doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("decomposition values never exceed the norm; spectral reaches it") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int dim = 2 + static_cast<int>(seed % 5);
    const DensityMatrix rho = buresgen::full_rank_state(dim, 1100 + seed);
    const TangentForm form = buresgen::tangent_at(rho, 1200 + seed);
    const double norm = tangent_norm(rho, form);

    CHECK(decomposition_value(rho, form, {identity(dim)}) <= 1e-12);

    std::vector<std::vector<Matrix>> sampled;
    for (int k = 0; k < 6; ++k) {
      sampled.push_back(
          buresgen::projector_partition(dim, 2 + k % 3, 7000 + 10 * seed + k));
      sampled.push_back(buresgen::commuting_positive_partition(
          dim, 2 + k % 3, 7100 + 10 * seed + k));
      sampled.push_back(
          buresgen::positive_partition(dim, 3, 7200 + 10 * seed + k));
    }
    const double best = tangent_norm_oracle(rho, form, sampled);
    CHECK(best <= norm + 1e-9);

    const double spectral =
        decomposition_value(rho, form, spectral_oracle_partition(rho, form));
    CHECK(spectral <= norm + 1e-9);
    CHECK(spectral >= norm - 1e-3);
  }
}

TEST_CASE("commuting case equals the classical Fisher value") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int dim = 2 + static_cast<int>(seed % 4);
    const DensityMatrix rho = buresgen::full_rank_state(dim, 1300 + seed);
    // Build T diagonal in rho's eigenbasis.
    buresgen::Stream stream(1400 + seed);
    RealVector d(dim);
    for (int k = 0; k < dim; ++k) d(k) = stream.gaussian();
    d.array() -= d.mean();
    const Matrix t = rho.eigvecs * d.asDiagonal() * rho.eigvecs.adjoint();
    const TangentForm form = traceless(rho, t);
    double classical = 0.0;
    for (int k = 0; k < dim; ++k) {
      classical += d(k) * d(k) / rho.eigvals(k);
    }
    classical = 0.5 * std::sqrt(classical);
    CHECK(tangent_norm(rho, form) ==
          doctest::Approx(classical).epsilon(1e-9));
    // The eigenprojector partition attains it.
    std::vector<Matrix> parts;
    for (int k = 0; k < dim; ++k) {
      parts.push_back(rho.eigvecs.col(k) * rho.eigvecs.col(k).adjoint());
    }
    CHECK(decomposition_value(rho, form, parts) ==
          doctest::Approx(classical).epsilon(1e-9));
  }
}

TEST_CASE("refining a decomposition never lowers its value") {
  const DensityMatrix rho = buresgen::full_rank_state(4, 1500);
  const TangentForm form = buresgen::tangent_at(rho, 1501);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto fine = buresgen::projector_partition(4, 4, 1600 + seed);
    std::vector<Matrix> coarse = {fine[0] + fine[1], fine[2] + fine[3]};
    CHECK(decomposition_value(rho, form, coarse) <=
          decomposition_value(rho, form, fine) + 1e-12);
  }
}

TEST_CASE("functional norm bound ||T||_1 <= 2 ||T||_rho") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int dim = 2 + static_cast<int>(seed % 7);
    const int rank = 1 + static_cast<int>(seed % dim);
    const DensityMatrix rho =
        rank == dim ? buresgen::full_rank_state(dim, 1700 + seed)
                    : buresgen::rank_r_state(dim, rank, 1700 + seed);
    const TangentForm form = buresgen::tangent_at(rho, 1800 + seed);
    CHECK(trace_norm(form.matrix) <= 2.0 * tangent_norm(rho, form) + 1e-9);
  }
}

TEST_CASE("tangent norm is basis invariant") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const int dim = 2 + static_cast<int>(seed % 6);
    const DensityMatrix rho = buresgen::full_rank_state(dim, 1900 + seed);
    const TangentForm form = buresgen::tangent_at(rho, 2000 + seed);
    buresgen::Stream stream(2100 + seed);
    const Matrix u = stream.haar_unitary(dim);
    const DensityMatrix rho_u = validate_density(u * rho.matrix * u.adjoint());
    const TangentForm form_u =
        validate_tangent_form(rho_u, u * form.matrix * u.adjoint());
    CHECK(std::abs(tangent_norm(rho, form) - tangent_norm(rho_u, form_u)) <=
          1e-10);
  }
}

TEST_CASE("degenerate spectra: formulas survive in-eigenspace rotations") {
  // rho with a threefold degenerate eigenvalue; a unitary commuting with rho
  // rotates the solver's arbitrary eigenbasis choice inside that block, and
  // no downstream value may move.
  buresgen::Stream stream(9000);
  const Matrix v = stream.haar_unitary(4);
  RealVector spec(4);
  spec << 0.4, 0.2, 0.2, 0.2;
  const DensityMatrix rho =
      validate_density(v * spec.asDiagonal() * v.adjoint());
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const TangentForm form = buresgen::tangent_at(rho, 9100 + seed);
    const Matrix x = lyapunov_solve(rho, form);
    CHECK((x * rho.matrix + rho.matrix * x - form.matrix).norm() <= 1e-10);

    // Block unitary: free 3x3 rotation inside the degenerate eigenspace.
    buresgen::Stream rot(9200 + seed);
    Matrix block = Matrix::Identity(4, 4);
    block.block(1, 1, 3, 3) = rot.haar_unitary(3);
    const Matrix w = v * block * v.adjoint();
    CHECK((w * rho.matrix - rho.matrix * w).norm() <= 1e-12);

    const TangentForm rotated =
        validate_tangent_form(rho, w * form.matrix * w.adjoint());
    CHECK(std::abs(tangent_norm(rho, form) - tangent_norm(rho, rotated)) <=
          1e-10);
    const Matrix x_rot = lyapunov_solve(rho, rotated);
    CHECK((x_rot - w * x * w.adjoint()).norm() <= 1e-9);
    CHECK((psi0(rho, rotated) - w * psi0(rho, form) * w.adjoint()).norm() <=
          1e-9);
  }
}

TEST_CASE("sqrt_derivative formula and finite differences") {
  const DensityMatrix half = diag_state({0.5, 0.5});
  Matrix t = Matrix::Zero(2, 2);
  t(0, 1) = Complex(0.2, 0.1);
  t(1, 0) = std::conj(t(0, 1));
  const TangentForm form = validate_tangent_form(half, t);
  CHECK((sqrt_derivative(half, form) - t / std::sqrt(2.0)).norm() <= 1e-12);

  const DensityMatrix diag = diag_state({0.7, 0.3});
  const TangentForm form2 = validate_tangent_form(diag, t);
  const Matrix d = sqrt_derivative(diag, form2);
  CHECK(std::abs(d(0, 1) - t(0, 1) / (std::sqrt(0.7) + std::sqrt(0.3))) <=
        1e-12);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int dim = 2 + static_cast<int>(seed % 5);
    const DensityMatrix rho = buresgen::full_rank_state(dim, 2200 + seed);
    const TangentForm form3 = buresgen::tangent_at(rho, 2300 + seed);
    const double h = 1e-5;
    const Matrix fd = (sqrt_psd(rho.matrix + h * form3.matrix) -
                       sqrt_psd(rho.matrix - h * form3.matrix)) /
                      (2.0 * h);
    CHECK((sqrt_derivative(rho, form3) - fd).norm() <= 1e-6);
  }

  const DensityMatrix deficient = buresgen::rank_r_state(3, 2, 2400);
  const TangentForm form4 = buresgen::tangent_at(deficient, 2401);
  CHECK_THROWS_AS(sqrt_derivative(deficient, form4), NotFullRankError);
}

TEST_CASE("canonical curve") {
  const DensityMatrix nu = buresgen::full_rank_state(3, 2500);
  const Matrix zero = Matrix::Zero(3, 3);
  const CanonicalCurve constant = canonical_curve(nu, TangentForm{zero});
  CHECK((constant.at(0.7).matrix - nu.matrix).norm() <= 1e-12);

  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const int dim = 2 + static_cast<int>(seed % 4);
    const int rank = (seed % 3 == 0) ? dim - 1 : dim;
    const DensityMatrix base =
        rank == dim ? buresgen::full_rank_state(dim, 2600 + seed)
                    : buresgen::rank_r_state(dim, rank, 2600 + seed);
    const TangentForm form = buresgen::tangent_at(base, 2700 + seed);
    const CanonicalCurve curve = canonical_curve(base, form);

    CHECK(curve.norm2 ==
          doctest::Approx(std::pow(tangent_norm(base, form), 2))
              .epsilon(1e-10));
    CHECK((curve.at(0.0).matrix - base.matrix).norm() <= 1e-12);
    for (double t : {-1.0, -0.4, 0.3, 1.0}) {
      const DensityMatrix sample = curve.at(t);  // validates
      CHECK(sample.eigvals.sum() == doctest::Approx(1.0).epsilon(1e-12));
      const Matrix c = curve.implementation(t);
      CHECK((c * c.adjoint() - sample.matrix).norm() <= 1e-10);
    }
    // Central difference at zero reproduces the tangent form.
    const double h = 1e-6;
    const Matrix fd = (curve.at(h).matrix - curve.at(-h).matrix) / (2.0 * h);
    CHECK((fd - form.matrix).norm() <= 1e-6);
  }
}
