#include "fscm/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <string>

#include "fscm/errors.hpp"

namespace fscm {

TriMesh::TriMesh(std::vector<Point2> points, std::vector<Triangle> triangles, std::vector<std::uint32_t> edge_masks)
    : points_(std::move(points)), triangles_(std::move(triangles)), edge_masks_(std::move(edge_masks)) {
  if (edge_masks_.size() != points_.size()) {
    throw InvalidArgument("TriMesh: one edge mask per vertex required");
  }
  interior_count_ = static_cast<std::size_t>(
      std::find_if(edge_masks_.begin(), edge_masks_.end(), [](std::uint32_t m) { return m != 0; }) -
      edge_masks_.begin());
  if (std::any_of(edge_masks_.begin() + static_cast<std::ptrdiff_t>(interior_count_), edge_masks_.end(),
                  [](std::uint32_t m) { return m == 0; })) {
    throw InvalidArgument("TriMesh: vertices must be numbered interior-first");
  }
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    for (std::size_t v : triangles_[t]) {
      if (v >= points_.size()) throw InvalidArgument("TriMesh: triangle references missing vertex");
    }
    if (!(signed_area(t) > 0.0)) {
      throw DegenerateTriangle("TriMesh: triangle " + std::to_string(t) + " is not counterclockwise");
    }
    const auto c = corners(t);
    h_ = std::max({h_, norm(c[1] - c[0]), norm(c[2] - c[1]), norm(c[0] - c[2])});
  }
  build_locator();
}

double TriMesh::signed_area(std::size_t t) const {
  const auto c = corners(t);
  return 0.5 * cross(c[1] - c[0], c[2] - c[0]);
}

double TriMesh::area() const {
  double sum = 0.0;
  for (std::size_t t = 0; t < triangles_.size(); ++t) sum += signed_area(t);
  return sum;
}

std::array<Point2, 3> TriMesh::corners(std::size_t t) const {
  const Triangle& tri = triangles_[t];
  return {points_[tri[0]], points_[tri[1]], points_[tri[2]]};
}

std::vector<MeshEdge> TriMesh::edges() const {
  std::map<std::pair<std::size_t, std::size_t>, int> count;
  for (const Triangle& tri : triangles_) {
    for (int i = 0; i < 3; ++i) {
      const std::size_t a = tri[i];
      const std::size_t b = tri[(i + 1) % 3];
      ++count[{std::min(a, b), std::max(a, b)}];
    }
  }
  std::vector<MeshEdge> out;
  out.reserve(count.size());
  for (const auto& [key, c] : count) out.push_back({key.first, key.second, c});
  return out;
}

double TriMesh::min_angle() const {
  double best = std::numbers::pi;
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto c = corners(t);
    for (int i = 0; i < 3; ++i) {
      const Point2 u = c[(i + 1) % 3] - c[i];
      const Point2 v = c[(i + 2) % 3] - c[i];
      best = std::min(best, std::acos(std::clamp(dot(u, v) / (norm(u) * norm(v)), -1.0, 1.0)));
    }
  }
  return best;
}

void TriMesh::build_locator() {
  if (points_.empty()) return;
  Point2 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
  Point2 hi{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
  for (const Point2& p : points_) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  box_min_ = lo;
  bucket_size_ = h_ > 0.0 ? h_ : 1.0;
  buckets_x_ = static_cast<std::size_t>((hi.x - lo.x) / bucket_size_) + 1;
  buckets_y_ = static_cast<std::size_t>((hi.y - lo.y) / bucket_size_) + 1;
  buckets_.assign(buckets_x_ * buckets_y_, {});

  auto clamp_index = [](double v, std::size_t count) {
    const double i = std::floor(v);
    if (i < 0.0) return std::size_t{0};
    return std::min(static_cast<std::size_t>(i), count - 1);
  };
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto c = corners(t);
    const double x0 = std::min({c[0].x, c[1].x, c[2].x});
    const double x1 = std::max({c[0].x, c[1].x, c[2].x});
    const double y0 = std::min({c[0].y, c[1].y, c[2].y});
    const double y1 = std::max({c[0].y, c[1].y, c[2].y});
    const std::size_t i0 = clamp_index((x0 - lo.x) / bucket_size_ - 1e-9, buckets_x_);
    const std::size_t i1 = clamp_index((x1 - lo.x) / bucket_size_ + 1e-9, buckets_x_);
    const std::size_t j0 = clamp_index((y0 - lo.y) / bucket_size_ - 1e-9, buckets_y_);
    const std::size_t j1 = clamp_index((y1 - lo.y) / bucket_size_ + 1e-9, buckets_y_);
    for (std::size_t j = j0; j <= j1; ++j) {
      for (std::size_t i = i0; i <= i1; ++i) buckets_[j * buckets_x_ + i].push_back(t);
    }
  }
}

std::optional<Location> TriMesh::locate(Point2 p, double tol) const {
  if (buckets_.empty()) return std::nullopt;
  const double fx = (p.x - box_min_.x) / bucket_size_;
  const double fy = (p.y - box_min_.y) / bucket_size_;
  if (fx < -1e-9 || fy < -1e-9) return std::nullopt;
  const auto i = std::min(static_cast<std::size_t>(std::max(fx, 0.0)), buckets_x_ - 1);
  const auto j = std::min(static_cast<std::size_t>(std::max(fy, 0.0)), buckets_y_ - 1);

  std::optional<Location> best;
  double best_min = -std::numeric_limits<double>::max();
  for (std::size_t t : buckets_[j * buckets_x_ + i]) {
    const auto c = corners(t);
    const double twice = cross(c[1] - c[0], c[2] - c[0]);
    const double l1 = cross(p - c[0], c[2] - c[0]) / twice;
    const double l2 = cross(c[1] - c[0], p - c[0]) / twice;
    const std::array<double, 3> bary{1.0 - l1 - l2, l1, l2};
    const double lowest = std::min({bary[0], bary[1], bary[2]});
    if (lowest > best_min) {
      best_min = lowest;
      best = Location{t, bary};
    }
    if (lowest >= 0.0) break;
  }
  if (!best || best_min < -tol * 1e3) return std::nullopt;
  return best;
}

MeshPtr triangulate(const PolygonalSection& section, int n) {
  if (n < 2) throw InvalidArgument("triangulate: n must be >= 2");
  if (!section.is_rectilinear()) {
    throw UnsupportedGeometry("triangulate: section is not an axis-aligned rectilinear polygon");
  }
  const double dn = static_cast<double>(n);
  long ix0 = std::numeric_limits<long>::max();
  long ix1 = std::numeric_limits<long>::min();
  long iy0 = ix0;
  long iy1 = ix1;
  for (const Point2& v : section.vertices()) {
    const double gx = v.x * dn;
    const double gy = v.y * dn;
    if (std::abs(gx - std::round(gx)) > 1e-9 || std::abs(gy - std::round(gy)) > 1e-9) {
      throw UnsupportedGeometry("triangulate: section vertices are not on the 1/n grid");
    }
    ix0 = std::min(ix0, std::lround(gx));
    ix1 = std::max(ix1, std::lround(gx));
    iy0 = std::min(iy0, std::lround(gy));
    iy1 = std::max(iy1, std::lround(gy));
  }

  const long nx = ix1 - ix0;
  const long ny = iy1 - iy0;
  auto grid_point = [&](long i, long j) {
    return Point2{static_cast<double>(ix0 + i) / dn, static_cast<double>(iy0 + j) / dn};
  };

  constexpr std::size_t kUnused = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> node_of((nx + 1) * (ny + 1), kUnused);
  auto node_index = [&](long i, long j) { return static_cast<std::size_t>(j * (nx + 1) + i); };

  std::vector<std::array<long, 2>> cells;
  for (long j = 0; j < ny; ++j) {
    for (long i = 0; i < nx; ++i) {
      const Point2 centre = grid_point(i, j) + Point2{0.5 / dn, 0.5 / dn};
      if (!section.contains(centre, 0.0)) continue;
      cells.push_back({i, j});
      for (long dj = 0; dj <= 1; ++dj) {
        for (long di = 0; di <= 1; ++di) node_of[node_index(i + di, j + dj)] = 0;
      }
    }
  }

  // Classify used grid nodes, then number interior nodes first.
  std::vector<std::pair<std::size_t, std::uint32_t>> interior;
  std::vector<std::pair<std::size_t, std::uint32_t>> boundary;
  for (long j = 0; j <= ny; ++j) {
    for (long i = 0; i <= nx; ++i) {
      const std::size_t g = node_index(i, j);
      if (node_of[g] == kUnused) continue;
      std::uint32_t mask = 0;
      const Point2 p = grid_point(i, j);
      for (std::size_t k = 0; k < section.edge_count(); ++k) {
        if (section.on_edge(p, k)) mask |= (1U << k);
      }
      (mask == 0 ? interior : boundary).emplace_back(g, mask);
    }
  }

  std::vector<Point2> points;
  std::vector<std::uint32_t> masks;
  points.reserve(interior.size() + boundary.size());
  for (const auto* group : {&interior, &boundary}) {
    for (const auto& [g, mask] : *group) {
      node_of[g] = points.size();
      const long i = static_cast<long>(g % static_cast<std::size_t>(nx + 1));
      const long j = static_cast<long>(g / static_cast<std::size_t>(nx + 1));
      points.push_back(grid_point(i, j));
      masks.push_back(mask);
    }
  }

  std::vector<Triangle> triangles;
  triangles.reserve(2 * cells.size());
  for (const auto& [i, j] : cells) {
    const std::size_t a = node_of[node_index(i, j)];
    const std::size_t b = node_of[node_index(i + 1, j)];
    const std::size_t c = node_of[node_index(i + 1, j + 1)];
    const std::size_t d = node_of[node_index(i, j + 1)];
    triangles.push_back({a, b, c});
    triangles.push_back({a, c, d});
  }
  return std::make_shared<const TriMesh>(std::move(points), std::move(triangles), std::move(masks));
}

void write_mesh(std::ostream& out, const TriMesh& mesh) {
  out << mesh.vertex_count() << ' ' << mesh.triangle_count() << '\n';
  out << std::setprecision(17);
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
    const Point2 p = mesh.points()[v];
    out << p.x << ' ' << p.y << ' ' << mesh.edge_mask(v) << '\n';
  }
  for (const Triangle& t : mesh.triangles()) {
    out << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  }
}

MeshPtr read_mesh(std::istream& in) {
  std::size_t nv = 0;
  std::size_t nt = 0;
  if (!(in >> nv >> nt)) throw InvalidArgument("read_mesh: missing 'V T' header");
  std::vector<Point2> points(nv);
  std::vector<std::uint32_t> masks(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    if (!(in >> points[v].x >> points[v].y >> masks[v])) {
      throw InvalidArgument("read_mesh: truncated vertex block at line " + std::to_string(v + 2));
    }
  }
  std::vector<Triangle> triangles(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    for (std::size_t& idx : triangles[t]) {
      if (!(in >> idx) || idx == 0 || idx > nv) {
        throw InvalidArgument("read_mesh: bad triangle record " + std::to_string(t + 1));
      }
      --idx;
    }
  }
  return std::make_shared<const TriMesh>(std::move(points), std::move(triangles), std::move(masks));
}

}  // namespace fscm
