#pragma once

#include <Eigen/Core>
#include <string>

#include "exrings/coupling.hpp"
#include "exrings/observables.hpp"
#include "exrings/spectral.hpp"

namespace exrings {

// Canonical numeric formatting for every CSV we emit: '.' decimal separator,
// 12 significant digits, no grouping.  Output is byte-stable for equal inputs.
std::string fmt_g12(double value);

void ensure_directory(const std::string& dir);
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// time,sigma
std::string diffusion_series_csv(const DiffusionSeries& series);

// time,ring,population — populations rows are rings in chain order.
std::string ring_population_series_csv(const Eigen::VectorXd& times,
                                       const Eigen::MatrixXd& populations,
                                       int first_ring);

// row,col,value (debug export)
std::string hamiltonian_csv(const Hamiltonian& hamiltonian);

// p,q,eigenvalue
std::string spectrum_csv(const CirculantSpectrum& spectrum);

}  // namespace exrings
