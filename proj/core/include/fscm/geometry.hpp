#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace fscm {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point2 a, Point2 b) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }

/// Rigid motion taking the reentrant corner to the origin and the first
/// corner edge onto the positive polar axis.
struct LocalFrame {
  Point2 origin;
  double rotation = 0.0;  // polar angle of the first corner edge in global coordinates

  Point2 to_local(Point2 p) const;
  Point2 to_global(Point2 q) const;
};

struct PolarCoordinates {
  double rho = 0.0;
  double phi = 0.0;
};

/// Index pair (a, b) into PolygonalSection::vertices; a is the start point.
using EdgeIndices = std::pair<std::size_t, std::size_t>;

/// Polygonal cross-section with exactly one reentrant corner C.
///
/// edges()[0] and edges()[1] are the two segments meeting at C, both
/// oriented away from C. The remaining edges follow the boundary loop
/// counterclockwise starting at the far end of edges()[0].
class PolygonalSection {
 public:
  /// `loop` lists the vertices counterclockwise; `corner` indexes the reentrant one.
  PolygonalSection(std::vector<Point2> loop, std::size_t corner);

  const std::vector<Point2>& vertices() const { return vertices_; }
  const std::vector<EdgeIndices>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t reentrant_vertex() const { return corner_; }
  Point2 corner() const { return vertices_[corner_]; }
  double interior_angle() const { return interior_angle_; }
  double alpha() const { return alpha_; }
  /// pi / alpha, the opening of the wedge.
  double opening() const { return interior_angle_; }
  const LocalFrame& frame() const { return frame_; }

  double area() const;
  bool contains(Point2 p, double tol = 1e-12) const;
  /// Segment endpoints of edge k (0-based).
  std::pair<Point2, Point2> edge(std::size_t k) const;
  bool on_edge(Point2 p, std::size_t k, double tol = 1e-12) const;
  bool is_rectilinear(double tol = 1e-12) const;

 private:
  std::vector<Point2> vertices_;
  std::vector<EdgeIndices> edges_;
  std::size_t corner_;
  double interior_angle_;
  double alpha_;
  LocalFrame frame_;
};

/// The L-shape (-1,1)^2 minus [0,1]x(-1,0] with the corner at the origin.
PolygonalSection make_l_section();

/// Polar coordinates around the reentrant corner, phi measured from the first
/// corner edge. Throws OutsideWedge when phi leaves [0, pi/alpha] by more than 1e-12.
PolarCoordinates polar_at(const PolygonalSection& section, Point2 p);

/// Inverse of polar_at.
Point2 point_at(const PolygonalSection& section, PolarCoordinates pc);

}  // namespace fscm
