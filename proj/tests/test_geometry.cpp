#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fscm/errors.hpp"
#include "fscm/geometry.hpp"

using namespace fscm;
constexpr double kPi = std::numbers::pi;

TEST(Geometry, LShapeBasics) {
  const PolygonalSection s = make_l_section();
  EXPECT_NEAR(s.alpha(), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(s.opening(), 1.5 * kPi, 1e-15);
  EXPECT_NEAR(s.area(), 3.0, 1e-15);
  EXPECT_EQ(s.corner(), (Point2{0.0, 0.0}));
  EXPECT_TRUE(s.is_rectilinear());
  ASSERT_EQ(s.edge_count(), 6u);

  const auto [a0, b0] = s.edge(0);
  EXPECT_EQ(a0, (Point2{0.0, 0.0}));
  EXPECT_EQ(b0, (Point2{1.0, 0.0}));
  const auto [a1, b1] = s.edge(1);
  EXPECT_EQ(a1, (Point2{0.0, 0.0}));
  EXPECT_EQ(b1, (Point2{0.0, -1.0}));
}

TEST(Geometry, ContainsAndEdges) {
  const PolygonalSection s = make_l_section();
  EXPECT_TRUE(s.contains({-0.5, -0.5}));
  EXPECT_TRUE(s.contains({0.5, 0.5}));
  EXPECT_FALSE(s.contains({0.5, -0.5}));
  EXPECT_FALSE(s.contains({1.5, 0.0}));
  EXPECT_TRUE(s.on_edge({0.5, 0.0}, 0));
  EXPECT_TRUE(s.on_edge({0.0, -0.5}, 1));
  EXPECT_FALSE(s.on_edge({0.5, 0.0}, 1));
}

TEST(Geometry, PolarOrientation) {
  const PolygonalSection s = make_l_section();
  // phi runs counterclockwise from the first corner edge through the domain.
  EXPECT_NEAR(polar_at(s, {1.0, 0.0}).phi, 0.0, 1e-15);
  EXPECT_NEAR(polar_at(s, {0.0, 1.0}).phi, 0.5 * kPi, 1e-15);
  EXPECT_NEAR(polar_at(s, {-1.0, 0.0}).phi, kPi, 1e-15);
  EXPECT_NEAR(polar_at(s, {0.0, -1.0}).phi, 1.5 * kPi, 1e-15);
  EXPECT_NEAR(polar_at(s, {-1.0, -1.0}).rho, std::sqrt(2.0), 1e-15);
}

TEST(Geometry, PolarRoundTrip) {
  const PolygonalSection s = make_l_section();
  for (double rho : {1e-6, 0.3, 1.2}) {
    for (int i = 0; i <= 12; ++i) {
      const PolarCoordinates pc{rho, 1.5 * kPi * i / 12.0};
      const PolarCoordinates back = polar_at(s, point_at(s, pc));
      EXPECT_NEAR(back.rho, pc.rho, 1e-14 * (1.0 + rho));
      EXPECT_NEAR(back.phi, pc.phi, 1e-12);
    }
  }
}

TEST(Geometry, OutsideWedgeThrows) {
  const PolygonalSection s = make_l_section();
  EXPECT_THROW(polar_at(s, {0.5, -0.5}), OutsideWedge);
}

TEST(Geometry, RotatedSectionFrame) {
  // The L-shape rotated by 90 degrees and shifted; alpha and the local
  // polar angle must not change.
  auto rot = [](Point2 p) { return Point2{2.0 - p.y, 3.0 + p.x}; };
  std::vector<Point2> loop;
  const PolygonalSection base = make_l_section();
  for (Point2 v : base.vertices()) loop.push_back(rot(v));
  const PolygonalSection s(loop, 0);
  EXPECT_NEAR(s.alpha(), 2.0 / 3.0, 1e-14);
  const PolarCoordinates pc = polar_at(s, rot({-0.3, 0.4}));
  const PolarCoordinates ref = polar_at(make_l_section(), {-0.3, 0.4});
  EXPECT_NEAR(pc.rho, ref.rho, 1e-14);
  EXPECT_NEAR(pc.phi, ref.phi, 1e-14);
}

TEST(Geometry, RejectsBadSections) {
  const std::vector<Point2> l = make_l_section().vertices();
  std::vector<Point2> cw(l.rbegin(), l.rend());
  EXPECT_THROW(PolygonalSection(cw, 5), InvalidArgument);
  // Convex square: no reentrant vertex.
  EXPECT_THROW(PolygonalSection({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, 0), InvalidArgument);
  // Designated vertex is convex.
  EXPECT_THROW(PolygonalSection(l, 1), InvalidArgument);
  // Two reentrant corners (a U-shape).
  EXPECT_THROW(PolygonalSection({{0, 0}, {3, 0}, {3, 2}, {2, 2}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}, 4), InvalidArgument);
  // Self-intersecting loop.
  EXPECT_THROW(PolygonalSection({{0, 0}, {2, 0}, {0, 1}, {2, 1}, {1, 3}}, 0), InvalidArgument);
  EXPECT_THROW(PolygonalSection({{0, 0}, {1, 0}}, 0), InvalidArgument);
}
