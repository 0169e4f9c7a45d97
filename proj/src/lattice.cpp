#include "exrings/lattice.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace exrings {

namespace {

void check_parameters(int n, int rings, double radius, double spacing,
                      const char* spacing_name) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (rings < 1) throw std::invalid_argument("N must be >= 1");
  if (!(radius > 0.0)) throw std::invalid_argument("R must be > 0");
  if (!(spacing > 0.0))
    throw std::invalid_argument(std::string(spacing_name) + " must be > 0");
}

}  // namespace

GeometryKind geometry_kind_from_string(std::string_view s) {
  if (s == "rings") return GeometryKind::RingStack;
  if (s == "helix") return GeometryKind::Helix;
  throw std::invalid_argument("unknown geometry kind '" + std::string(s) +
                              "' (expected \"rings\" or \"helix\")");
}

std::string to_string(GeometryKind kind) {
  return kind == GeometryKind::RingStack ? "rings" : "helix";
}

SiteLattice::SiteLattice(GeometryKind kind, int n, int rings, double radius,
                         double spacing)
    : kind_(kind),
      n_(n),
      rings_(rings),
      center_(rings / 2),
      radius_(radius),
      spacing_(spacing),
      positions_(3, static_cast<Eigen::Index>(n) * rings) {}

SiteLattice SiteLattice::ring_stack(int n, int rings, double radius,
                                    double spacing) {
  check_parameters(n, rings, radius, spacing, "D");
  SiteLattice lat(GeometryKind::RingStack, n, rings, radius, spacing);
  const double step = 2.0 * std::numbers::pi / n;
  for (int j = 0; j < rings; ++j) {
    const double z = spacing * (j - lat.center_);
    for (int i = 1; i <= n; ++i) {
      const Eigen::Index s = static_cast<Eigen::Index>(j) * n + (i - 1);
      lat.positions_.col(s) << radius * std::cos(step * i),
          radius * std::sin(step * i), z;
    }
  }
  return lat;
}

SiteLattice SiteLattice::helix(int n, int turns, double radius, double pitch) {
  check_parameters(n, turns, radius, pitch, "d");
  SiteLattice lat(GeometryKind::Helix, n, turns, radius, pitch);
  const double step = 2.0 * std::numbers::pi / n;
  for (int i = 1; i <= n * turns; ++i) {
    lat.positions_.col(i - 1) << radius * std::cos(step * i),
        radius * std::sin(step * i), pitch * i / n;
  }
  return lat;
}

Eigen::Vector3d SiteLattice::position(int site) const {
  check_site(site);
  return positions_.col(site);
}

int SiteLattice::ring_of(int site) const {
  check_site(site);
  return site / n_ - center_;
}

int SiteLattice::first_site_of_ring(int ring) const {
  const int j = ring + center_;
  if (j < 0 || j >= rings_)
    throw std::out_of_range("ring index " + std::to_string(ring) +
                            " outside " + std::to_string(min_ring()) + ".." +
                            std::to_string(max_ring()));
  return j * n_;
}

double SiteLattice::pair_distance(int a, int b) const {
  check_site(a);
  check_site(b);
  return (positions_.col(a) - positions_.col(b)).norm();
}

void SiteLattice::check_site(int site) const {
  if (site < 0 || site >= size())
    throw std::out_of_range("site index " + std::to_string(site) +
                            " outside 0.." + std::to_string(size() - 1));
}

SiteLattice build_ring_stack(int n, int rings, double radius, double spacing) {
  return SiteLattice::ring_stack(n, rings, radius, spacing);
}

SiteLattice build_helix(int n, int turns, double radius, double pitch) {
  return SiteLattice::helix(n, turns, radius, pitch);
}

double pair_distance(const SiteLattice& lattice, int a, int b) {
  return lattice.pair_distance(a, b);
}

}  // namespace exrings
