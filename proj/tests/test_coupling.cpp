#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "exrings/coupling.hpp"
#include "exrings/lattice.hpp"
#include "exrings/spectral.hpp"

using namespace exrings;

TEST_CASE("hamiltonian assembly applies the 1/r^3 kernel to every pair") {
  const CouplingKernel kernel(1.0);
  const SiteLattice chain = build_ring_stack(1, 3, 1.0, 10.0);
  const Hamiltonian h = assemble_hamiltonian(chain, kernel);
  CHECK(h.dim() == 3);
  CHECK(h.matrix(0, 1) == doctest::Approx(1e-3).epsilon(1e-13));
  CHECK(h.matrix(1, 2) == doctest::Approx(1e-3).epsilon(1e-13));
  CHECK(h.matrix(0, 2) == doctest::Approx(1.0 / 8000.0).epsilon(1e-13));
  CHECK(h.matrix.diagonal().cwiseAbs().maxCoeff() == 0.0);
  CHECK((h.matrix - h.matrix.transpose()).cwiseAbs().maxCoeff() == 0.0);

  const Eigen::VectorXd offsets = Eigen::VectorXd::LinSpaced(3, -0.5, 0.5);
  const Hamiltonian disordered = assemble_hamiltonian(chain, kernel, offsets);
  CHECK(disordered.matrix.diagonal().isApprox(offsets));
  CHECK_THROWS_AS(assemble_hamiltonian(chain, kernel, Eigen::VectorXd::Zero(4)),
                  std::invalid_argument);
}

TEST_CASE("hamiltonian is covariant under the ring rotation") {
  const CouplingKernel kernel(1.0);
  const SiteLattice lat = build_ring_stack(4, 3, 1.0, 2.0);
  const Hamiltonian h = assemble_hamiltonian(lat, kernel);
  // permutation: site k of each ring -> site k+1
  Eigen::MatrixXd perm = Eigen::MatrixXd::Zero(lat.size(), lat.size());
  for (int r = 0; r < 3; ++r)
    for (int k = 0; k < 4; ++k) perm(r * 4 + (k + 1) % 4, r * 4 + k) = 1.0;
  const Eigen::MatrixXd conjugated = perm * h.matrix * perm.transpose();
  CHECK((conjugated - h.matrix).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("disorder sampling: determinism and moments") {
  CHECK(sample_disorder({0.0, 42}, 5).isZero());
  const Eigen::VectorXd a = sample_disorder({0.3, 1234}, 100);
  const Eigen::VectorXd b = sample_disorder({0.3, 1234}, 100);
  CHECK(a.isApprox(b));
  const Eigen::VectorXd c = sample_disorder({0.3, 1235}, 100);
  CHECK_FALSE(a.isApprox(c));

  const Eigen::Index size = 100000;
  const Eigen::VectorXd big = sample_disorder({0.1, 7}, size);
  const double mean = big.mean();
  const double stddev = std::sqrt((big.array() - mean).square().sum() / (size - 1));
  CHECK(std::abs(mean) < 0.002);
  CHECK(std::abs(stddev - 0.1) < 0.002);

  CHECK_THROWS_AS(sample_disorder({-0.1, 0}, 3), std::invalid_argument);
  CHECK_THROWS_AS(sample_disorder({0.1, 0}, 0), std::invalid_argument);
}

TEST_CASE("block coefficients: symmetry and far-field limit") {
  const CouplingKernel kernel(1.0);
  CHECK_THROWS_AS(extract_block_coefficients(3, 4, 1.0, 1.0, kernel),
                  std::invalid_argument);

  const BlockCoefficients bc = extract_block_coefficients(4, 5, 1.0, 10.0, kernel);
  CHECK(bc.table()(0, 0) == 0.0);
  const double lo = std::pow(10.0 * 10.0 + 4.0, -1.5);
  for (int k = 0; k < 4; ++k) {
    CHECK(bc.table()(1, k) <= 1e-3 + 1e-15);
    CHECK(bc.table()(1, k) >= lo - 1e-15);
    CHECK(bc.table()(1, k) == doctest::Approx(bc.table()(1, (4 - k) % 4)));
    CHECK(bc.table()(1, k) == doctest::Approx(bc.table()(4, k)));  // torus mirror
  }

  // far field: the whole inter-ring row flattens to J/D^3 with O((R/D)^2) spread
  const BlockCoefficients far = extract_block_coefficients(6, 5, 1.0, 100.0, kernel);
  const auto row = far.table().row(1);
  const double spread = (row.maxCoeff() - row.minCoeff()) / row.mean();
  CHECK(spread < 6.5e-4);  // 6 (R/D)^2 to leading order
  CHECK(spread > 1e-6);

  // inter-ring row sums grow monotonically with n
  double previous = 0.0;
  for (int n = 1; n <= 7; ++n) {
    const double sum =
        extract_block_coefficients(n, 5, 1.0, 1.0, kernel).ring_sum(1);
    CHECK(sum > previous);
    previous = sum;
  }
}

TEST_CASE("torus hamiltonian commutes with the ring shift") {
  const CouplingKernel kernel(1.0);
  const BlockCoefficients bc = extract_block_coefficients(3, 5, 1.0, 2.0, kernel);
  const Hamiltonian torus = torus_hamiltonian(bc);
  const Eigen::Index dim = torus.dim();

  Eigen::MatrixXd shift = Eigen::MatrixXd::Zero(dim, dim);
  for (int r = 0; r < 5; ++r)
    for (int k = 0; k < 3; ++k) shift(((r + 1) % 5) * 3 + k, r * 3 + k) = 1.0;
  const Eigen::MatrixXd commutator = shift * torus.matrix - torus.matrix * shift;
  CHECK(commutator.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("three-ring torus with one site per ring is the weighted 3-cycle") {
  Eigen::MatrixXd table(3, 1);
  table << 0.0, 0.25, 0.25;
  const BlockCoefficients bc(1, 3, 1.0, 1.0, 1.0, table);
  const Hamiltonian torus = torus_hamiltonian(bc);
  Eigen::MatrixXd expected(3, 3);
  expected << 0, 0.25, 0.25, 0.25, 0, 0.25, 0.25, 0.25, 0;
  CHECK(torus.matrix.isApprox(expected, 1e-14));
}

TEST_CASE("open chain agrees with the torus away from the boundary wrap") {
  const CouplingKernel kernel(1.0);
  const int n = 2, rings = 5;
  const SiteLattice lat = build_ring_stack(n, rings, 1.0, 10.0);
  const Hamiltonian open = assemble_hamiltonian(lat, kernel);
  const Hamiltonian torus =
      torus_hamiltonian(extract_block_coefficients(n, rings, 1.0, 10.0, kernel));
  const int half = (rings - 1) / 2;
  for (int row = 0; row < open.dim(); ++row)
    for (int col = 0; col < open.dim(); ++col) {
      const int offset = std::abs(row / n - col / n);
      if (offset <= half - 1) {
        CHECK(open.matrix(row, col) ==
              doctest::Approx(torus.matrix(row, col)).epsilon(1e-14));
      }
    }
  // the wrap entries themselves differ (shorter distance on the torus)
  CHECK(torus.matrix(0, (rings - 1) * n) > open.matrix(0, (rings - 1) * n));
}

TEST_CASE("open-chain table rows are true separations") {
  const CouplingKernel kernel(2.0);
  const Eigen::MatrixXd open = open_chain_coupling_table(2, 5, 1.0, 3.0, kernel);
  CHECK(open.rows() == 5);
  CHECK(open(4, 0) == doctest::Approx(2.0 / std::pow(12.0, 3)));
  const BlockCoefficients torus = extract_block_coefficients(2, 5, 1.0, 3.0, kernel);
  CHECK(torus.at(4, 0) == doctest::Approx(2.0 / std::pow(3.0, 3)));
  CHECK(torus.at(-1, 0) == torus.at(1, 0));  // wrapped access
}

TEST_CASE("kernel validates its inputs") {
  CHECK_THROWS_AS(CouplingKernel(0.0), std::invalid_argument);
  CHECK_THROWS_AS(CouplingKernel(-1.0), std::invalid_argument);
  const CouplingKernel kernel(2.0);
  CHECK(kernel(2.0) == doctest::Approx(0.25));
  CHECK_THROWS_AS(kernel(0.0), std::invalid_argument);
}
