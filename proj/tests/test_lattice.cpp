#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "exrings/lattice.hpp"

using namespace exrings;

TEST_CASE("ring stack positions follow the angular parametrization") {
  // n=1, N=3: one site per ring at angle 2*pi, rings centered on z = 0
  const SiteLattice lat = build_ring_stack(1, 3, 1.0, 10.0);
  REQUIRE(lat.size() == 3);
  CHECK(lat.position(0).isApprox(Eigen::Vector3d(1, 0, -10), 1e-12));
  CHECK(lat.position(1).isApprox(Eigen::Vector3d(1, 0, 0), 1e-12));
  CHECK(lat.position(2).isApprox(Eigen::Vector3d(1, 0, 10), 1e-12));

  const SiteLattice quad = build_ring_stack(4, 1, 1.0, 10.0);
  CHECK((quad.position(0) - Eigen::Vector3d(0, 1, 0)).norm() < 1e-12);
  CHECK((quad.position(1) - Eigen::Vector3d(-1, 0, 0)).norm() < 1e-12);
  CHECK((quad.position(2) - Eigen::Vector3d(0, -1, 0)).norm() < 1e-12);
  CHECK((quad.position(3) - Eigen::Vector3d(1, 0, 0)).norm() < 1e-12);

  // angularly aligned sites on adjacent rings sit one spacing apart
  const SiteLattice stack = build_ring_stack(4, 2, 1.0, 10.0);
  CHECK(stack.pair_distance(0, 4) == doctest::Approx(10.0).epsilon(1e-13));
}

TEST_CASE("helix positions and turn indexing") {
  const SiteLattice helix = build_helix(4, 1, 1.0, 8.0);
  for (int i = 0; i < 4; ++i)
    CHECK(helix.position(i)(2) == doctest::Approx(2.0 * (i + 1)));

  // one full turn apart: same angle, axial separation = pitch
  const SiteLattice rod = build_helix(3, 2, 1.0, 10.0);
  CHECK(rod.pair_distance(0, 3) == doctest::Approx(10.0).epsilon(1e-13));
  const Eigen::Vector3d a = rod.position(0);
  const Eigen::Vector3d b = rod.position(3);
  CHECK(std::abs(a.x() - b.x()) < 1e-12);
  CHECK(std::abs(a.y() - b.y()) < 1e-12);

  // turns group n consecutive sites
  const SiteLattice grouped = build_helix(3, 5, 1.0, 2.0);
  for (int s = 0; s < grouped.size(); ++s)
    CHECK(grouped.ring_of(s) == s / 3 - 2);
}

TEST_CASE("pair distances: symmetry, chord formula, triangle inequality") {
  const SiteLattice lat = build_ring_stack(5, 3, 1.3, 2.7);
  CHECK(lat.pair_distance(4, 4) == 0.0);
  for (int a = 0; a < lat.size(); a += 2)
    for (int b = 0; b < lat.size(); b += 3) {
      CHECK(lat.pair_distance(a, b) == lat.pair_distance(b, a));
      for (int c = 1; c < lat.size(); c += 4)
        CHECK(lat.pair_distance(a, c) <=
              lat.pair_distance(a, b) + lat.pair_distance(b, c) + 1e-12);
    }

  // adjacent-ring distance^2 = D^2 + 2 R^2 (1 - cos(2 pi k / n))
  const int n = 5;
  const double radius = 1.3, spacing = 2.7;
  for (int k = 0; k < n; ++k) {
    const double expected = std::sqrt(
        spacing * spacing +
        2.0 * radius * radius * (1.0 - std::cos(2.0 * std::numbers::pi * k / n)));
    CHECK(lat.pair_distance(0, n + k) == doctest::Approx(expected).epsilon(1e-13));
  }

  // opposite sites on a two-site ring span the diameter
  const SiteLattice pairs = build_ring_stack(2, 1, 1.0, 10.0);
  CHECK(pairs.pair_distance(0, 1) == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("ring indexing is centered and partitions evenly") {
  const SiteLattice lat = build_ring_stack(3, 7, 1.0, 4.0);
  CHECK(lat.min_ring() == -3);
  CHECK(lat.max_ring() == 3);
  std::map<int, int> counts;
  for (int s = 0; s < lat.size(); ++s) counts[lat.ring_of(s)]++;
  CHECK(counts.size() == 7);
  for (const auto& [ring, count] : counts) CHECK(count == 3);
  CHECK(lat.first_site_of_ring(0) == 9);
  CHECK(lat.ring_of(lat.first_site_of_ring(0)) == 0);
}

TEST_CASE("rotation by 2 pi / n permutes the site set") {
  const SiteLattice lat = build_ring_stack(5, 3, 1.0, 2.0);
  const double angle = 2.0 * std::numbers::pi / 5;
  Eigen::Matrix3d rot;
  rot << std::cos(angle), -std::sin(angle), 0, std::sin(angle), std::cos(angle),
      0, 0, 0, 1;
  for (int s = 0; s < lat.size(); ++s) {
    const Eigen::Vector3d rotated = rot * lat.position(s);
    double best = 1e9;
    for (int t = 0; t < lat.size(); ++t)
      best = std::min(best, (rotated - lat.position(t)).norm());
    CHECK(best < 1e-12);
  }
}

TEST_CASE("helix sites with equal index mod n share a vertical line") {
  const SiteLattice helix = build_helix(4, 6, 1.7, 3.0);
  for (int s = 0; s + 4 < helix.size(); ++s) {
    CHECK(std::abs(helix.position(s).x() - helix.position(s + 4).x()) < 1e-12);
    CHECK(std::abs(helix.position(s).y() - helix.position(s + 4).y()) < 1e-12);
  }
}

TEST_CASE("invalid parameters and site indices are rejected") {
  CHECK_THROWS_AS(build_ring_stack(0, 3, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_ring_stack(3, 0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_ring_stack(3, 3, -1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_ring_stack(3, 3, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_helix(2, 2, 1.0, -2.0), std::invalid_argument);
  const SiteLattice lat = build_ring_stack(2, 2, 1.0, 1.0);
  CHECK_THROWS_AS(lat.pair_distance(0, 4), std::out_of_range);
  CHECK_THROWS_AS(lat.ring_of(-1), std::out_of_range);
  CHECK_THROWS_AS(lat.first_site_of_ring(5), std::out_of_range);
}

TEST_CASE("geometry kind round trips through config strings") {
  CHECK(geometry_kind_from_string("rings") == GeometryKind::RingStack);
  CHECK(geometry_kind_from_string("helix") == GeometryKind::Helix);
  CHECK(to_string(GeometryKind::RingStack) == "rings");
  CHECK(to_string(GeometryKind::Helix) == "helix");
  CHECK_THROWS_AS(geometry_kind_from_string("spiral"), std::invalid_argument);
}
