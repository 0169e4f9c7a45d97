#include "exrings/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace exrings {

std::string fmt_g12(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

void ensure_directory(const std::string& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw std::runtime_error("cannot create directory '" + dir +
                             "': " + ec.message());
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string diffusion_series_csv(const DiffusionSeries& series) {
  std::ostringstream os;
  os << "time,sigma\n";
  for (Eigen::Index i = 0; i < series.times.size(); ++i)
    os << fmt_g12(series.times[i]) << ',' << fmt_g12(series.sigma[i]) << '\n';
  return os.str();
}

std::string ring_population_series_csv(const Eigen::VectorXd& times,
                                       const Eigen::MatrixXd& populations,
                                       int first_ring) {
  if (times.size() != populations.cols())
    throw std::invalid_argument("time and population counts differ");
  std::ostringstream os;
  os << "time,ring,population\n";
  for (Eigen::Index i = 0; i < times.size(); ++i)
    for (Eigen::Index r = 0; r < populations.rows(); ++r)
      os << fmt_g12(times[i]) << ',' << (first_ring + static_cast<int>(r)) << ','
         << fmt_g12(populations(r, i)) << '\n';
  return os.str();
}

std::string hamiltonian_csv(const Hamiltonian& hamiltonian) {
  std::ostringstream os;
  os << "row,col,value\n";
  for (Eigen::Index r = 0; r < hamiltonian.dim(); ++r)
    for (Eigen::Index c = 0; c < hamiltonian.dim(); ++c)
      os << r << ',' << c << ',' << fmt_g12(hamiltonian.matrix(r, c)) << '\n';
  return os.str();
}

std::string spectrum_csv(const CirculantSpectrum& spectrum) {
  std::ostringstream os;
  os << "p,q,eigenvalue\n";
  for (Eigen::Index p = 0; p < spectrum.values.rows(); ++p)
    for (Eigen::Index q = 0; q < spectrum.values.cols(); ++q)
      os << p << ',' << q << ',' << fmt_g12(spectrum.values(p, q)) << '\n';
  return os.str();
}

}  // namespace exrings
