#pragma once

#include <Eigen/Core>
#include <string>
#include <string_view>

namespace exrings {

// Geometry of the chromophore arrangement.
enum class GeometryKind { RingStack, Helix };

GeometryKind geometry_kind_from_string(std::string_view s);  // "rings" | "helix"
std::string to_string(GeometryKind kind);

// Immutable chromophore lattice: n sites per ring (or per helix turn), N rings
// (or turns), radius R, axial spacing (ring separation D, or helix pitch d).
//
// Sites are stored 0-based in ring-major order; the angular formulas use the
// 1-based label i = site + 1, so a ring's sites sit at angles 2*pi*i/n for
// i = 1..n.  Ring indices are centered at construction: the middle ring is 0
// and rings run min_ring()..max_ring() (-T..T for odd N, T = (N-1)/2).
//
// Immutable after construction; safe to share across threads.
class SiteLattice {
 public:
  static SiteLattice ring_stack(int n, int rings, double radius, double spacing);
  static SiteLattice helix(int n, int turns, double radius, double pitch);

  GeometryKind kind() const { return kind_; }
  int sites_per_ring() const { return n_; }
  int ring_count() const { return rings_; }
  double radius() const { return radius_; }
  double spacing() const { return spacing_; }
  int size() const { return n_ * rings_; }

  const Eigen::Matrix3Xd& positions() const { return positions_; }
  Eigen::Vector3d position(int site) const;

  // Centered ring (or turn) index of a site.
  int ring_of(int site) const;
  int min_ring() const { return -center_; }
  int max_ring() const { return rings_ - 1 - center_; }

  // First site of the ring with the given centered index.
  int first_site_of_ring(int ring) const;

  double pair_distance(int a, int b) const;

 private:
  SiteLattice(GeometryKind kind, int n, int rings, double radius, double spacing);
  void check_site(int site) const;

  GeometryKind kind_;
  int n_;
  int rings_;
  int center_;  // 0-based index of the ring labelled 0
  double radius_;
  double spacing_;
  Eigen::Matrix3Xd positions_;
};

SiteLattice build_ring_stack(int n, int rings, double radius, double spacing);
SiteLattice build_helix(int n, int turns, double radius, double pitch);
double pair_distance(const SiteLattice& lattice, int a, int b);

}  // namespace exrings
