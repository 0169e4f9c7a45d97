#pragma once

#include <Eigen/Core>

#include "exrings/coupling.hpp"

namespace exrings {

// Spectrum of a block-circulant Hamiltonian from the double discrete Fourier
// transform of the coupling table.  e(p, q) is labelled by the ring Fourier
// order p = 0..N-1 and the intra-ring order q = 0..n-1; for real symmetric
// input e(p, q) = e(N-p, q) = e(p, n-q).
struct CirculantSpectrum {
  Eigen::MatrixXd values;  // N x n, entry (p, q)

  double max_abs() const { return values.cwiseAbs().maxCoeff(); }
  Eigen::VectorXd sorted() const;  // ascending, as a multiset
};

CirculantSpectrum circulant_eigenvalues(const BlockCoefficients& coefficients);

// Dense symmetric eigendecomposition; columns of `eigenvectors` are
// orthonormal and eigenvalues ascend.
struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

EigenDecomposition dense_eigendecomposition(const Eigen::MatrixXd& symmetric);
EigenDecomposition dense_eigendecomposition(const Hamiltonian& hamiltonian);

// Operator norm (max |eigenvalue|); gates the short-time analytic formulas.
double operator_norm_bound(const Eigen::MatrixXd& symmetric);
double operator_norm_bound(const Hamiltonian& hamiltonian);

}  // namespace exrings
