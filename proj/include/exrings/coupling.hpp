#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>

#include "exrings/lattice.hpp"

namespace exrings {

// Isotropic dipolar kernel: coupling(r) = J / r^3, J > 0.
// Orientation-dependent kernels are out of scope; the class is the seam where
// a different distance law would plug in.
class CouplingKernel {
 public:
  explicit CouplingKernel(double strength = 1.0);
  double strength() const { return strength_; }
  double operator()(double distance) const;

 private:
  double strength_;
};

// Quenched Gaussian on-site energy offsets: std deviation sigma (units of J),
// uncorrelated across sites, reproducible for a fixed seed.
struct DisorderSpec {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

Eigen::VectorXd sample_disorder(const DisorderSpec& spec, Eigen::Index size);

// Dense single-excitation Hamiltonian over the site basis.  Off-diagonals are
// kernel couplings at the pair distance (every pair included); the diagonal
// holds the disorder offsets eta_r, with the mean excitation energy shifted
// out.  Immutable by convention once assembled.
struct Hamiltonian {
  Eigen::MatrixXd matrix;            // real symmetric, dim x dim
  Eigen::VectorXd diagonal_offsets;  // eta_r; zeros when no disorder

  Eigen::Index dim() const { return matrix.rows(); }
};

Hamiltonian assemble_hamiltonian(
    const SiteLattice& lattice, const CouplingKernel& kernel,
    const std::optional<Eigen::VectorXd>& offsets = std::nullopt);

// Inter-ring coupling table h(j,k) of a ring stack: the coupling between site
// 0 of ring 0 and site k of ring j, min-imaged onto the torus (ring offset
// min(j, N-j)), so h(j,.) == h(N-j,.) and the j = 1..T rows match the open
// chain exactly.  h(0,0) = 0 (no self coupling).
class BlockCoefficients {
 public:
  BlockCoefficients(int n, int rings, double radius, double spacing,
                    double strength, Eigen::MatrixXd table);

  int sites_per_ring() const { return n_; }
  int ring_count() const { return rings_; }
  int half_span() const { return (rings_ - 1) / 2; }  // T
  double radius() const { return radius_; }
  double spacing() const { return spacing_; }
  double strength() const { return strength_; }

  const Eigen::MatrixXd& table() const { return table_; }  // rings x n
  double at(int ring_offset, int site_offset) const;       // wraps mod N, mod n
  double ring_sum(int ring_offset) const;                   // sum_k h(j,k)
  double ring_sum_squares(int ring_offset) const;           // sum_k h(j,k)^2

 private:
  int n_;
  int rings_;
  double radius_;
  double spacing_;
  double strength_;
  Eigen::MatrixXd table_;
};

// Requires odd N (the torus min-imaging is unambiguous only then).
BlockCoefficients extract_block_coefficients(int n, int rings, double radius,
                                             double spacing,
                                             const CouplingKernel& kernel);

// Open-chain variant: row j holds the couplings between rings separated by j
// ring spacings (no min-imaging), j = 0..N-1.  Used by propagation code that
// works ring-resolved on the finite chain.
Eigen::MatrixXd open_chain_coupling_table(int n, int rings, double radius,
                                          double spacing,
                                          const CouplingKernel& kernel);

// Exact block-circulant Hamiltonian on the torus built from h; commutes with
// the ring-shift permutation pi_N (x) 1_n.
Hamiltonian torus_hamiltonian(const BlockCoefficients& coefficients);

}  // namespace exrings
