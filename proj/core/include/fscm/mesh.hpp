#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "fscm/geometry.hpp"

namespace fscm {

using Triangle = std::array<std::size_t, 3>;

struct MeshEdge {
  std::size_t a = 0;  // a < b
  std::size_t b = 0;
  int triangle_count = 0;
};

/// Point location result: containing triangle and barycentric coordinates.
struct Location {
  std::size_t triangle = 0;
  std::array<double, 3> bary{};
};

/// Conforming P1 triangulation.
///
/// Vertices are numbered interior-first: [0, interior_count()) are interior,
/// the remaining boundary_count() vertices lie on the section boundary.
/// edge_mask(v) has bit k set when vertex v lies on edge k of the section
/// (0-based, so bit 0 is the first corner edge); interior vertices carry 0.
class TriMesh {
 public:
  TriMesh(std::vector<Point2> points, std::vector<Triangle> triangles, std::vector<std::uint32_t> edge_masks);

  const std::vector<Point2>& points() const { return points_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<std::uint32_t>& edge_masks() const { return edge_masks_; }

  std::size_t vertex_count() const { return points_.size(); }
  std::size_t triangle_count() const { return triangles_.size(); }
  std::size_t interior_count() const { return interior_count_; }
  std::size_t boundary_count() const { return points_.size() - interior_count_; }

  std::uint32_t edge_mask(std::size_t v) const { return edge_masks_[v]; }
  bool is_boundary(std::size_t v) const { return v >= interior_count_; }
  bool on_edge(std::size_t v, std::size_t k) const { return (edge_masks_[v] >> k) & 1U; }

  /// Maximal triangle diameter.
  double h() const { return h_; }
  double area() const;
  double signed_area(std::size_t t) const;
  std::array<Point2, 3> corners(std::size_t t) const;

  /// Unique edges with the number of incident triangles; built on demand.
  std::vector<MeshEdge> edges() const;
  /// Smallest interior angle over all triangles, in radians.
  double min_angle() const;

  std::optional<Location> locate(Point2 p, double tol = 1e-12) const;

 private:
  void build_locator();

  std::vector<Point2> points_;
  std::vector<Triangle> triangles_;
  std::vector<std::uint32_t> edge_masks_;
  std::size_t interior_count_ = 0;
  double h_ = 0.0;

  // Uniform bucket grid for point location.
  Point2 box_min_;
  double bucket_size_ = 1.0;
  std::size_t buckets_x_ = 1;
  std::size_t buckets_y_ = 1;
  std::vector<std::vector<std::size_t>> buckets_;
};

using MeshPtr = std::shared_ptr<const TriMesh>;

/// Uniform structured triangulation with n cells per unit length, each
/// square split along its (x0,y0)-(x1,y1) diagonal. h = sqrt(2)/n.
/// Throws UnsupportedGeometry unless the section is axis-aligned with
/// vertices on the 1/n grid.
MeshPtr triangulate(const PolygonalSection& section, int n);

/// Plain-text mesh format: header "V T", then V lines "x y flag", then
/// T lines "i j k" with 1-based vertex indices. flag is the edge mask
/// (bit k-1 set for edge k, 0 for interior vertices).
void write_mesh(std::ostream& out, const TriMesh& mesh);
MeshPtr read_mesh(std::istream& in);

}  // namespace fscm
