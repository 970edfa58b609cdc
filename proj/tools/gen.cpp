#include "gen.hpp"

#include <Eigen/QR>

#include <cmath>

namespace buresgen {

using bures::Complex;
using bures::DensityMatrix;
using bures::Matrix;
using bures::RealVector;
using bures::TangentForm;
using bures::Vector;

double Stream::uniform() {
  const std::uint64_t bits = engine_() >> 11;  // 53 random bits
  return (static_cast<double>(bits) + 1.0) * 0x1p-53;
}

double Stream::gaussian() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::acos(-1.0) * u2);
}

Complex Stream::cgaussian() {
  return Complex(gaussian(), gaussian()) / std::sqrt(2.0);
}

Matrix Stream::gaussian_matrix(int rows, int cols) {
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = cgaussian();
  }
  return m;
}

Matrix Stream::gaussian_hermitian(int dim) {
  const Matrix g = gaussian_matrix(dim, dim);
  return 0.5 * (g + g.adjoint());
}

Matrix Stream::haar_unitary(int dim) {
  const Matrix g = gaussian_matrix(dim, dim);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix phases so the distribution is Haar, not just orthonormal.
  for (int k = 0; k < dim; ++k) {
    const Complex d = r(k, k);
    q.col(k) *= (std::abs(d) > 0 ? d / std::abs(d) : Complex(1, 0));
  }
  return q;
}

Vector Stream::unit_vector(int dim) {
  Vector v(dim);
  for (int k = 0; k < dim; ++k) v(k) = cgaussian();
  return v / v.norm();
}

RealVector Stream::probability_vector(int dim) {
  RealVector p(dim);
  for (int k = 0; k < dim; ++k) p(k) = -std::log(uniform());
  return p / p.sum();
}

DensityMatrix full_rank_state(int dim, std::uint64_t seed, double floor) {
  Stream stream(seed);
  const Matrix a = stream.gaussian_matrix(dim, dim);
  Matrix s = a * a.adjoint();
  s /= s.trace().real();
  s = (s + floor * Matrix::Identity(dim, dim)) / (1.0 + floor * dim);
  return bures::validate_density(0.5 * (s + s.adjoint()));
}

DensityMatrix rank_r_state(int dim, int rank, std::uint64_t seed) {
  Stream stream(seed);
  const Matrix a = stream.gaussian_matrix(dim, rank);
  Matrix s = a * a.adjoint();
  s /= s.trace().real();
  return bures::validate_density(0.5 * (s + s.adjoint()));
}

DensityMatrix pure_state(int dim, std::uint64_t seed) {
  Stream stream(seed);
  const Vector v = stream.unit_vector(dim);
  return bures::validate_density(v * v.adjoint());
}

std::pair<DensityMatrix, DensityMatrix> commuting_pair(int dim,
                                                       std::uint64_t seed,
                                                       bool full_rank_spectra) {
  Stream stream(seed);
  const Matrix basis = stream.haar_unitary(dim);
  RealVector p = stream.probability_vector(dim);
  RealVector q = stream.probability_vector(dim);
  if (full_rank_spectra) {
    const double floor = 0.01;
    p = (p.array() + floor).matrix() / (1.0 + floor * dim);
    q = (q.array() + floor).matrix() / (1.0 + floor * dim);
  }
  auto build = [&](const RealVector& spec) {
    const Matrix m = basis * spec.asDiagonal() * basis.adjoint();
    return bures::validate_density(0.5 * (m + m.adjoint()));
  };
  return {build(p), build(q)};
}

TangentForm tangent_at(const DensityMatrix& base, std::uint64_t seed) {
  Stream stream(seed);
  const int n = base.dim();
  Matrix h = stream.gaussian_hermitian(n);
  const Matrix comp = Matrix::Identity(n, n) - base.support;
  h -= comp * h * comp;
  h -= (h.trace().real() / base.rank) * base.support;
  h = 0.5 * (h + h.adjoint());
  const double norm = h.norm();
  if (norm > 0) h /= norm;
  return bures::validate_tangent_form(base, h);
}

Matrix hamiltonian(int dim, std::uint64_t seed) {
  Stream stream(seed);
  return stream.gaussian_hermitian(dim);
}

std::vector<Vector> orthonormal_basis(int dim, std::uint64_t seed) {
  Stream stream(seed);
  const Matrix u = stream.haar_unitary(dim);
  std::vector<Vector> basis;
  basis.reserve(dim);
  for (int k = 0; k < dim; ++k) basis.push_back(u.col(k));
  return basis;
}

std::vector<Matrix> projector_partition(int dim, int parts,
                                        std::uint64_t seed) {
  Stream stream(seed);
  const Matrix u = stream.haar_unitary(dim);
  std::vector<Matrix> out;
  parts = std::min(parts, dim);
  out.reserve(parts);
  int start = 0;
  for (int j = 0; j < parts; ++j) {
    const int remaining = dim - start;
    const int blocks_left = parts - j;
    int width = remaining / blocks_left;
    if (j < remaining % blocks_left) ++width;
    Matrix p = Matrix::Zero(dim, dim);
    for (int k = start; k < start + width; ++k) {
      p += u.col(k) * u.col(k).adjoint();
    }
    out.push_back(std::move(p));
    start += width;
  }
  return out;
}

std::vector<Matrix> commuting_positive_partition(int dim, int parts,
                                                 std::uint64_t seed) {
  Stream stream(seed);
  const Matrix u = stream.haar_unitary(dim);
  // Column-stochastic weights: each basis projector is split across parts.
  std::vector<RealVector> weights(dim);
  for (int i = 0; i < dim; ++i) weights[i] = stream.probability_vector(parts);
  std::vector<Matrix> out(parts, Matrix::Zero(dim, dim));
  for (int i = 0; i < dim; ++i) {
    const Matrix e = u.col(i) * u.col(i).adjoint();
    for (int j = 0; j < parts; ++j) out[j] += weights[i](j) * e;
  }
  return out;
}

std::vector<Matrix> positive_partition(int dim, int parts,
                                       std::uint64_t seed) {
  Stream stream(seed);
  std::vector<Matrix> raw;
  raw.reserve(parts);
  Matrix sum = Matrix::Zero(dim, dim);
  for (int j = 0; j < parts; ++j) {
    const Matrix a = stream.gaussian_matrix(dim, dim);
    raw.push_back(a * a.adjoint());
    sum += raw.back();
  }
  // Renormalize so the parts close to the identity exactly.
  const bures::EigenSystem es = bures::hermitian_eig(sum);
  const Matrix inv_root = es.eigvecs *
                          es.eigvals.cwiseSqrt().cwiseInverse().asDiagonal() *
                          es.eigvecs.adjoint();
  for (Matrix& y : raw) {
    y = inv_root * y * inv_root;
    y = 0.5 * (y + y.adjoint());
  }
  return raw;
}

}  // namespace buresgen
