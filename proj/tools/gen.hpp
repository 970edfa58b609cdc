#ifndef BURES_TOOLS_GEN_HPP
#define BURES_TOOLS_GEN_HPP

// Seeded instance generation for the CLI and the test suites. Lives outside
// the library so the library itself stays free of random state. Everything
// here is a pure function of the seed: uniforms come from the mt19937_64
// output sequence (which the standard pins down) and Gaussians from an
// explicit Box-Muller transform, so identical seeds give identical bytes on
// every platform.

#include <cstdint>
#include <random>
#include <vector>

#include "bures/operator_core.hpp"
#include "bures/tangent_metric.hpp"

namespace buresgen {

class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  double uniform();         // [2^-53, 1], safe for logarithms
  double gaussian();        // standard normal
  bures::Complex cgaussian();  // complex standard normal, E|z|^2 = 1

  bures::Matrix gaussian_matrix(int rows, int cols);
  bures::Matrix gaussian_hermitian(int dim);
  bures::Matrix haar_unitary(int dim);
  bures::Vector unit_vector(int dim);
  bures::RealVector probability_vector(int dim);

 private:
  std::mt19937_64 engine_;
};

/// A A* + relative floor, normalized; smallest eigenvalue stays above
/// floor / (1 + floor * dim).
bures::DensityMatrix full_rank_state(int dim, std::uint64_t seed,
                                     double floor = 0.01);

/// Rank-r truncation: A A* with A of width r, normalized.
bures::DensityMatrix rank_r_state(int dim, int rank, std::uint64_t seed);

bures::DensityMatrix pure_state(int dim, std::uint64_t seed);

/// Pair diagonal in a common random basis (commuting states).
std::pair<bures::DensityMatrix, bures::DensityMatrix> commuting_pair(
    int dim, std::uint64_t seed, bool full_rank_spectra = true);

/// Traceless Hermitian direction in the tangent space at `base` (block
/// condition enforced by construction), HS-normalized.
bures::TangentForm tangent_at(const bures::DensityMatrix& base,
                              std::uint64_t seed);

bures::Matrix hamiltonian(int dim, std::uint64_t seed);

/// Orthonormal basis (columns of a Haar unitary).
std::vector<bures::Vector> orthonormal_basis(int dim, std::uint64_t seed);

/// Random orthoprojector partition: Haar basis grouped into `parts` blocks.
std::vector<bures::Matrix> projector_partition(int dim, int parts,
                                               std::uint64_t seed);

/// Commuting positive (non-projector) decomposition of the identity:
/// column-stochastic mixture of a random rank-one projector partition.
std::vector<bures::Matrix> commuting_positive_partition(int dim, int parts,
                                                        std::uint64_t seed);

/// Non-commuting positive decomposition: random psd pieces renormalized via
/// S^-1/2 Y_j S^-1/2.
std::vector<bures::Matrix> positive_partition(int dim, int parts,
                                              std::uint64_t seed);

}  // namespace buresgen

#endif  // BURES_TOOLS_GEN_HPP
