#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "exrings/coupling.hpp"
#include "exrings/lattice.hpp"
#include "exrings/spectral.hpp"

using namespace exrings;

TEST_CASE("scalar circulant spectrum: nearest-neighbour ring of rings") {
  const double v = 0.37;
  Eigen::MatrixXd table(3, 1);
  table << 0.0, v, v;
  const BlockCoefficients bc(1, 3, 1.0, 1.0, 1.0, table);
  const CirculantSpectrum spectrum = circulant_eigenvalues(bc);
  for (int p = 0; p < 3; ++p)
    CHECK(spectrum.values(p, 0) ==
          doctest::Approx(2.0 * v * std::cos(2.0 * std::numbers::pi * p / 3)));
}

TEST_CASE("circulant spectrum equals the dense torus spectrum as a multiset") {
  const CouplingKernel kernel(1.0);
  const BlockCoefficients bc = extract_block_coefficients(3, 5, 1.0, 10.0, kernel);
  const Eigen::VectorXd analytic = circulant_eigenvalues(bc).sorted();
  const Eigen::VectorXd dense =
      dense_eigendecomposition(torus_hamiltonian(bc)).eigenvalues;
  REQUIRE(analytic.size() == dense.size());
  CHECK((analytic - dense).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("constant inter-ring blocks only populate the q = 0 orders") {
  Eigen::MatrixXd table = Eigen::MatrixXd::Constant(5, 3, 0.2);
  table.row(0).setZero();  // no intra-ring couplings, no self coupling
  const BlockCoefficients bc(3, 5, 1.0, 1.0, 1.0, table);
  const CirculantSpectrum spectrum = circulant_eigenvalues(bc);
  for (int p = 0; p < 5; ++p)
    for (int q = 1; q < 3; ++q) CHECK(std::abs(spectrum.values(p, q)) < 1e-12);
}

TEST_CASE("spectrum symmetry, trace and Parseval identities") {
  const CouplingKernel kernel(1.0);
  const BlockCoefficients bc = extract_block_coefficients(5, 7, 1.0, 2.0, kernel);
  const CirculantSpectrum spectrum = circulant_eigenvalues(bc);
  const int rings = 7, n = 5;
  for (int p = 0; p < rings; ++p)
    for (int q = 0; q < n; ++q) {
      CHECK(spectrum.values(p, q) ==
            doctest::Approx(spectrum.values((rings - p) % rings, q)).epsilon(1e-12));
      CHECK(spectrum.values(p, q) ==
            doctest::Approx(spectrum.values(p, (n - q) % n)).epsilon(1e-12));
    }
  CHECK(std::abs(spectrum.values.sum()) < 1e-10);  // trace, h(0,0) = 0
  const double parseval_lhs = spectrum.values.array().square().sum();
  const double parseval_rhs = rings * n * bc.table().array().square().sum();
  CHECK(parseval_lhs == doctest::Approx(parseval_rhs).epsilon(1e-10));
}

TEST_CASE("dense eigendecomposition basics") {
  Eigen::MatrixXd diag = Eigen::Vector3d(3.0, -1.0, 2.0).asDiagonal();
  const EigenDecomposition eig = dense_eigendecomposition(diag);
  CHECK(eig.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(eig.eigenvalues(1) == doctest::Approx(2.0));
  CHECK(eig.eigenvalues(2) == doctest::Approx(3.0));
  for (int c = 0; c < 3; ++c)
    CHECK(eig.eigenvectors.col(c).cwiseAbs().maxCoeff() == doctest::Approx(1.0));

  Eigen::MatrixXd two(2, 2);
  two << 0.0, 0.7, 0.7, 0.0;
  const EigenDecomposition pair = dense_eigendecomposition(two);
  CHECK(pair.eigenvalues(0) == doctest::Approx(-0.7));
  CHECK(pair.eigenvalues(1) == doctest::Approx(0.7));

  CHECK_THROWS_AS(dense_eigendecomposition(Eigen::MatrixXd::Random(3, 4)),
                  std::invalid_argument);
  Eigen::MatrixXd asym(2, 2);
  asym << 0.0, 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(dense_eigendecomposition(asym), std::invalid_argument);
}

TEST_CASE("reconstruction and orthonormality at full problem size") {
  std::mt19937_64 engine(7);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd random(310, 310);
  for (Eigen::Index i = 0; i < random.rows(); ++i)
    for (Eigen::Index j = 0; j < random.cols(); ++j) random(i, j) = normal(engine);
  const Eigen::MatrixXd symmetric = 0.5 * (random + random.transpose());
  const EigenDecomposition eig = dense_eigendecomposition(symmetric);
  const Eigen::MatrixXd reconstructed = eig.eigenvectors *
                                        eig.eigenvalues.asDiagonal() *
                                        eig.eigenvectors.transpose();
  CHECK((reconstructed - symmetric).cwiseAbs().maxCoeff() < 1e-9);
  const Eigen::MatrixXd gram = eig.eigenvectors.transpose() * eig.eigenvectors;
  CHECK((gram - Eigen::MatrixXd::Identity(310, 310)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("operator norm bound") {
  CHECK(operator_norm_bound(Eigen::MatrixXd::Zero(4, 4)) == 0.0);
  Eigen::MatrixXd two(2, 2);
  two << 0.0, -0.3, -0.3, 0.0;
  CHECK(operator_norm_bound(two) == doctest::Approx(0.3));

  // full-scale geometry: the norm is set by the intra-ring couplings and
  // exceeds 1 (sum of the n = 5 ring couplings alone is 1.52)
  const SiteLattice lat = build_ring_stack(5, 31, 1.0, 10.0);
  const Hamiltonian h = assemble_hamiltonian(lat, CouplingKernel(1.0));
  const double norm = operator_norm_bound(h);
  CHECK(norm == doctest::Approx(1.5333).epsilon(1e-3));
  CHECK(norm > 1.0);
}
