#include "fscm/geometry.hpp"

#include <algorithm>
#include <numbers>
#include <string>

#include "fscm/errors.hpp"

namespace fscm {

namespace {

constexpr double kPi = std::numbers::pi;

double signed_area(const std::vector<Point2>& loop) {
  double twice = 0.0;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    twice += cross(loop[i], loop[(i + 1) % loop.size()]);
  }
  return 0.5 * twice;
}

// Counterclockwise turn from `from` to `to`, in [0, 2pi).
double ccw_angle(Point2 from, Point2 to) {
  double a = std::atan2(cross(from, to), dot(from, to));
  if (a < 0.0) a += 2.0 * kPi;
  return a;
}

bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
  auto orient = [](Point2 p, Point2 q, Point2 r) { return cross(q - p, r - p); };
  const double d1 = orient(c, d, a);
  const double d2 = orient(c, d, b);
  const double d3 = orient(a, b, c);
  const double d4 = orient(a, b, d);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

}  // namespace

Point2 LocalFrame::to_local(Point2 p) const {
  const Point2 d = p - origin;
  const double c = std::cos(rotation);
  const double s = std::sin(rotation);
  return {c * d.x + s * d.y, -s * d.x + c * d.y};
}

Point2 LocalFrame::to_global(Point2 q) const {
  const double c = std::cos(rotation);
  const double s = std::sin(rotation);
  return origin + Point2{c * q.x - s * q.y, s * q.x + c * q.y};
}

PolygonalSection::PolygonalSection(std::vector<Point2> loop, std::size_t corner)
    : vertices_(std::move(loop)), corner_(corner) {
  const std::size_t n = vertices_.size();
  if (n < 4) throw InvalidArgument("PolygonalSection: need at least 4 vertices");
  if (corner_ >= n) throw InvalidArgument("PolygonalSection: corner index out of range");
  if (signed_area(vertices_) <= 0.0) {
    throw InvalidArgument("PolygonalSection: vertex loop must be counterclockwise");
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_intersect(vertices_[i], vertices_[(i + 1) % n], vertices_[j], vertices_[(j + 1) % n])) {
        throw InvalidArgument("PolygonalSection: boundary loop is not simple");
      }
    }
  }

  // Exactly one reflex vertex, and it must be `corner`.
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 next = vertices_[(i + 1) % n] - vertices_[i];
    const Point2 prev = vertices_[(i + n - 1) % n] - vertices_[i];
    const double angle = ccw_angle(next, prev);
    if (i == corner_) {
      interior_angle_ = angle;
    } else if (angle > kPi + 1e-12) {
      throw InvalidArgument("PolygonalSection: more than one reentrant corner (vertex " +
                            std::to_string(i) + ")");
    }
  }
  if (!(interior_angle_ > kPi && interior_angle_ < 2.0 * kPi)) {
    throw InvalidArgument("PolygonalSection: designated corner is not reentrant");
  }
  alpha_ = kPi / interior_angle_;

  edges_.reserve(n);
  edges_.emplace_back(corner_, (corner_ + 1) % n);
  edges_.emplace_back(corner_, (corner_ + n - 1) % n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    edges_.emplace_back((corner_ + i) % n, (corner_ + i + 1) % n);
  }

  const Point2 first = vertices_[edges_[0].second] - vertices_[corner_];
  frame_ = LocalFrame{vertices_[corner_], std::atan2(first.y, first.x)};
}

double PolygonalSection::area() const { return signed_area(vertices_); }

std::pair<Point2, Point2> PolygonalSection::edge(std::size_t k) const {
  return {vertices_[edges_.at(k).first], vertices_[edges_.at(k).second]};
}

bool PolygonalSection::on_edge(Point2 p, std::size_t k, double tol) const {
  const auto [a, b] = edge(k);
  const Point2 ab = b - a;
  const double len = norm(ab);
  if (std::abs(cross(ab, p - a)) > tol * std::max(1.0, len)) return false;
  const double t = dot(p - a, ab) / (len * len);
  return t >= -tol && t <= 1.0 + tol;
}

bool PolygonalSection::contains(Point2 p, double tol) const {
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    if (on_edge(p, k, tol)) return true;
  }
  bool inside = false;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2 a = vertices_[i];
    const Point2 b = vertices_[j];
    if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) {
      inside = !inside;
    }
  }
  return inside;
}

bool PolygonalSection::is_rectilinear(double tol) const {
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const auto [a, b] = edge(k);
    if (std::abs(a.x - b.x) > tol && std::abs(a.y - b.y) > tol) return false;
  }
  return true;
}

PolygonalSection make_l_section() {
  return PolygonalSection({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {-1.0, 1.0}, {-1.0, -1.0}, {0.0, -1.0}}, 0);
}

PolarCoordinates polar_at(const PolygonalSection& section, Point2 p) {
  const Point2 q = section.frame().to_local(p);
  const double rho = norm(q);
  if (rho == 0.0) return {0.0, 0.0};
  double phi = std::atan2(q.y, q.x);
  if (phi < 0.0) phi += 2.0 * kPi;
  const double opening = section.opening();
  constexpr double tol = 1e-12;
  if (phi > opening) {
    if (2.0 * kPi - phi <= tol) {
      phi = 0.0;
    } else if (phi - opening <= tol) {
      phi = opening;
    } else {
      throw OutsideWedge("polar_at: point outside the corner wedge");
    }
  }
  return {rho, phi};
}

Point2 point_at(const PolygonalSection& section, PolarCoordinates pc) {
  return section.frame().to_global({pc.rho * std::cos(pc.phi), pc.rho * std::sin(pc.phi)});
}

}  // namespace fscm
