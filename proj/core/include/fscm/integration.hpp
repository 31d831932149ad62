#pragma once

#include <array>
#include <vector>

#include "fscm/mesh.hpp"
#include "fscm/quadrature.hpp"

namespace fscm {

/// Calls visit(triangle, bary, point, weight) for every quadrature point of
/// every triangle, using `rule` to pick the per-triangle scheme.
template <typename Visitor>
void for_each_quadrature_point(const TriMesh& mesh, const CornerAwareRule& rule, Visitor&& visit) {
  std::vector<QuadraturePoint> pts;
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto c = mesh.corners(t);
    rule.points(c, pts);
    const Point2 e1 = c[1] - c[0];
    const Point2 e2 = c[2] - c[0];
    const double twice = cross(e1, e2);
    for (const QuadraturePoint& q : pts) {
      const Point2 d = q.point - c[0];
      const double l1 = cross(d, e2) / twice;
      const double l2 = cross(e1, d) / twice;
      visit(t, std::array<double, 3>{1.0 - l1 - l2, l1, l2}, q.point, q.weight);
    }
  }
}

}  // namespace fscm
