#include "exrings/coupling.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "exrings/rng.hpp"

namespace exrings {

CouplingKernel::CouplingKernel(double strength) : strength_(strength) {
  if (!(strength > 0.0)) throw std::invalid_argument("J must be > 0");
}

double CouplingKernel::operator()(double distance) const {
  if (!(distance > 0.0))
    throw std::invalid_argument("coupling kernel requires distance > 0");
  return strength_ / (distance * distance * distance);
}

Eigen::VectorXd sample_disorder(const DisorderSpec& spec, Eigen::Index size) {
  if (spec.sigma < 0.0) throw std::invalid_argument("disorder sigma must be >= 0");
  if (size < 1) throw std::invalid_argument("disorder sample size must be >= 1");
  Eigen::VectorXd offsets = Eigen::VectorXd::Zero(size);
  if (spec.sigma == 0.0) return offsets;
  auto engine = make_engine(spec.seed);
  std::normal_distribution<double> normal(0.0, spec.sigma);
  for (Eigen::Index i = 0; i < size; ++i) offsets[i] = normal(engine);
  return offsets;
}

Hamiltonian assemble_hamiltonian(const SiteLattice& lattice,
                                 const CouplingKernel& kernel,
                                 const std::optional<Eigen::VectorXd>& offsets) {
  const Eigen::Index dim = lattice.size();
  if (offsets && offsets->size() != dim)
    throw std::invalid_argument("offsets length " +
                                std::to_string(offsets->size()) +
                                " does not match lattice size " +
                                std::to_string(dim));
  Hamiltonian h;
  h.matrix.setZero(dim, dim);
  h.diagonal_offsets = offsets ? *offsets : Eigen::VectorXd::Zero(dim);
  for (Eigen::Index m = 0; m < dim; ++m) {
    for (Eigen::Index r = m + 1; r < dim; ++r) {
      const double v = kernel(lattice.pair_distance(static_cast<int>(m),
                                                    static_cast<int>(r)));
      h.matrix(m, r) = v;
      h.matrix(r, m) = v;
    }
  }
  h.matrix.diagonal() = h.diagonal_offsets;
  return h;
}

namespace {

// Chord distance between site 0 of ring 0 and site k of a ring exactly
// `separation` ring spacings away: D^2 j^2 + 2 R^2 (1 - cos(2 pi k / n)).
double ring_pair_distance(int separation, int site_offset, int n, double radius,
                          double spacing) {
  const double axial = spacing * separation;
  const double angle = 2.0 * std::numbers::pi * site_offset / n;
  const double chord_sq = 2.0 * radius * radius * (1.0 - std::cos(angle));
  return std::sqrt(axial * axial + chord_sq);
}

Eigen::MatrixXd coupling_table(int n, int rings, double radius, double spacing,
                               const CouplingKernel& kernel, bool min_image) {
  Eigen::MatrixXd table(rings, n);
  for (int j = 0; j < rings; ++j) {
    const int separation = min_image ? std::min(j, rings - j) : j;
    for (int k = 0; k < n; ++k) {
      if (separation == 0 && k == 0) {
        table(j, k) = 0.0;  // no self coupling
        continue;
      }
      table(j, k) = kernel(ring_pair_distance(separation, k, n, radius, spacing));
    }
  }
  return table;
}

}  // namespace

BlockCoefficients::BlockCoefficients(int n, int rings, double radius,
                                     double spacing, double strength,
                                     Eigen::MatrixXd table)
    : n_(n),
      rings_(rings),
      radius_(radius),
      spacing_(spacing),
      strength_(strength),
      table_(std::move(table)) {
  if (table_.rows() != rings_ || table_.cols() != n_)
    throw std::invalid_argument("coefficient table shape does not match (N, n)");
}

double BlockCoefficients::at(int ring_offset, int site_offset) const {
  const int j = ((ring_offset % rings_) + rings_) % rings_;
  const int k = ((site_offset % n_) + n_) % n_;
  return table_(j, k);
}

double BlockCoefficients::ring_sum(int ring_offset) const {
  const int j = ((ring_offset % rings_) + rings_) % rings_;
  return table_.row(j).sum();
}

double BlockCoefficients::ring_sum_squares(int ring_offset) const {
  const int j = ((ring_offset % rings_) + rings_) % rings_;
  return table_.row(j).squaredNorm();
}

BlockCoefficients extract_block_coefficients(int n, int rings, double radius,
                                             double spacing,
                                             const CouplingKernel& kernel) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (rings < 1 || rings % 2 == 0)
    throw std::invalid_argument("block coefficients require odd N, got " +
                                std::to_string(rings));
  if (!(radius > 0.0)) throw std::invalid_argument("R must be > 0");
  if (!(spacing > 0.0)) throw std::invalid_argument("D must be > 0");
  return BlockCoefficients(
      n, rings, radius, spacing, kernel.strength(),
      coupling_table(n, rings, radius, spacing, kernel, /*min_image=*/true));
}

Eigen::MatrixXd open_chain_coupling_table(int n, int rings, double radius,
                                          double spacing,
                                          const CouplingKernel& kernel) {
  if (n < 1 || rings < 1)
    throw std::invalid_argument("open chain table requires n >= 1 and N >= 1");
  return coupling_table(n, rings, radius, spacing, kernel, /*min_image=*/false);
}

Hamiltonian torus_hamiltonian(const BlockCoefficients& coefficients) {
  const int n = coefficients.sites_per_ring();
  const int rings = coefficients.ring_count();
  const Eigen::Index dim = static_cast<Eigen::Index>(n) * rings;
  Hamiltonian h;
  h.matrix.setZero(dim, dim);
  h.diagonal_offsets = Eigen::VectorXd::Zero(dim);
  for (int r = 0; r < rings; ++r) {
    for (int a = 0; a < n; ++a) {
      const Eigen::Index row = static_cast<Eigen::Index>(r) * n + a;
      for (int s = 0; s < rings; ++s) {
        for (int b = 0; b < n; ++b) {
          const Eigen::Index col = static_cast<Eigen::Index>(s) * n + b;
          if (row == col) continue;
          h.matrix(row, col) = coefficients.at(s - r, b - a);
        }
      }
    }
  }
  return h;
}

}  // namespace exrings
