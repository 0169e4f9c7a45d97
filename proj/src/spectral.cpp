#include "exrings/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace exrings {

Eigen::VectorXd CirculantSpectrum::sorted() const {
  Eigen::VectorXd flat(values.size());
  Eigen::Index idx = 0;
  for (Eigen::Index p = 0; p < values.rows(); ++p)
    for (Eigen::Index q = 0; q < values.cols(); ++q) flat[idx++] = values(p, q);
  std::sort(flat.begin(), flat.end());
  return flat;
}

CirculantSpectrum circulant_eigenvalues(const BlockCoefficients& coefficients) {
  const int n = coefficients.sites_per_ring();
  const int rings = coefficients.ring_count();
  const auto& h = coefficients.table();
  CirculantSpectrum spectrum;
  spectrum.values.resize(rings, n);
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  for (int p = 0; p < rings; ++p) {
    for (int q = 0; q < n; ++q) {
      std::complex<double> acc = 0.0;
      for (int j = 0; j < rings; ++j) {
        for (int k = 0; k < n; ++k) {
          const double phase = 2.0 * std::numbers::pi *
                               (static_cast<double>(p) * j / rings +
                                static_cast<double>(q) * k / n);
          acc += std::polar(h(j, k), phase);
        }
      }
      if (std::abs(acc.imag()) > 1e-10 * scale * rings * n)
        throw std::runtime_error(
            "circulant spectrum has a non-real eigenvalue; coefficient table "
            "is not symmetric");
      spectrum.values(p, q) = acc.real();
    }
  }
  return spectrum;
}

EigenDecomposition dense_eigendecomposition(const Eigen::MatrixXd& symmetric) {
  if (symmetric.rows() != symmetric.cols())
    throw std::invalid_argument("eigendecomposition requires a square matrix");
  const double scale = std::max(1.0, symmetric.cwiseAbs().maxCoeff());
  if ((symmetric - symmetric.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("eigendecomposition requires a symmetric matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("dense symmetric eigensolver failed to converge");
  return EigenDecomposition{solver.eigenvalues(), solver.eigenvectors()};
}

EigenDecomposition dense_eigendecomposition(const Hamiltonian& hamiltonian) {
  return dense_eigendecomposition(hamiltonian.matrix);
}

double operator_norm_bound(const Eigen::MatrixXd& symmetric) {
  const auto decomposition = dense_eigendecomposition(symmetric);
  if (decomposition.eigenvalues.size() == 0) return 0.0;
  return decomposition.eigenvalues.cwiseAbs().maxCoeff();
}

double operator_norm_bound(const Hamiltonian& hamiltonian) {
  return operator_norm_bound(hamiltonian.matrix);
}

}  // namespace exrings
