#include "fscm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "fscm/errors.hpp"

namespace fscm {

namespace {

GaussRule compute_gauss(int m) {
  GaussRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  for (int i = 0; i < m; ++i) {
    // Newton iteration on P_m from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      const double pm = m == 0 ? 1.0 : (m == 1 ? x : p1);
      const double pm1 = m == 1 ? 1.0 : p0;
      dp = m * (x * pm - pm1) / (x * x - 1.0);
      const double dx = pm / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  std::reverse(rule.nodes.begin(), rule.nodes.end());
  std::reverse(rule.weights.begin(), rule.weights.end());
  return rule;
}

// Collapsed (Duffy) rule with singular vertex at the reference origin:
// (xi, eta) = (u (1 - v), u v), u = t^q, Jacobian u * q t^{q-1}.
ReferenceRule collapsed_rule(int order, int radial_power) {
  const GaussRule& g = gauss_legendre(order);
  ReferenceRule rule;
  rule.points.reserve(g.nodes.size() * g.nodes.size());
  const double q = radial_power;
  for (std::size_t a = 0; a < g.nodes.size(); ++a) {
    const double t = g.nodes[a];
    const double u = std::pow(t, q);
    const double ju = u * q * std::pow(t, q - 1.0);
    for (std::size_t b = 0; b < g.nodes.size(); ++b) {
      const double v = g.nodes[b];
      rule.points.push_back({u * (1.0 - v), u * v, g.weights[a] * g.weights[b] * ju});
    }
  }
  return rule;
}

double distance_to_segment(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double t = std::clamp(dot(p - a, ab) / dot(ab, ab), 0.0, 1.0);
  return norm(p - (a + t * ab));
}

}  // namespace

const GaussRule& gauss_legendre(int m) {
  if (m < 1) throw InvalidArgument("gauss_legendre: order must be >= 1");
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(m);
  if (it == cache.end()) it = cache.emplace(m, compute_gauss(m)).first;
  return it->second;
}

const ReferenceRule& triangle_rule_order4() {
  static const ReferenceRule rule = [] {
    constexpr double a = 0.445948490915965;
    constexpr double b = 0.108103018168070;
    constexpr double wa = 0.223381589678011 / 2.0;
    constexpr double c = 0.091576213509771;
    constexpr double d = 0.816847572980459;
    constexpr double wc = 0.109951743655322 / 2.0;
    ReferenceRule r;
    r.points = {{a, a, wa}, {b, a, wa}, {a, b, wa}, {c, c, wc}, {d, c, wc}, {c, d, wc}};
    return r;
  }();
  return rule;
}

void map_rule(const ReferenceRule& rule, const std::array<Point2, 3>& tri, std::vector<QuadraturePoint>& out) {
  const Point2 e1 = tri[1] - tri[0];
  const Point2 e2 = tri[2] - tri[0];
  const double jac = std::abs(cross(e1, e2));
  for (const auto& [xi, eta, w] : rule.points) {
    out.push_back({tri[0] + xi * e1 + eta * e2, w * jac});
  }
}

void graded_corner_points(const std::array<Point2, 3>& tri, const GradedOptions& options,
                          std::vector<QuadraturePoint>& out) {
  if (options.singularity_order >= 2.0) {
    throw NotIntegrable("graded quadrature: rho^{-sigma} with sigma >= 2 is not integrable in 2D");
  }
  // Duffy coordinates x = c + u ((1 - v) e1 + v e2), dA = u |e1 x e2| du dv.
  // rho^{-sigma} becomes u^{-sigma} g(v) with g smooth, so dyadic rings in u
  // carry a smooth integrand and the last cell is made polynomial by u = t^q.
  const GaussRule& ring = gauss_legendre(options.ring_order);
  const GaussRule& core = gauss_legendre(options.core_order);
  const GaussRule& across = gauss_legendre(std::max(options.ring_order, options.core_order));
  const Point2 c = tri[0];
  const Point2 e1 = tri[1] - c;
  const Point2 e2 = tri[2] - c;
  const double jac = std::abs(cross(e1, e2));

  auto emit = [&](double u, double wu) {
    for (std::size_t j = 0; j < across.nodes.size(); ++j) {
      const double v = across.nodes[j];
      out.push_back({c + u * ((1.0 - v) * e1 + v * e2), wu * across.weights[j] * u * jac});
    }
  };

  double hi = 1.0;
  for (int level = 0; level < options.levels; ++level) {
    const double lo = 0.5 * hi;
    for (std::size_t i = 0; i < ring.nodes.size(); ++i) emit(lo + ring.nodes[i] * (hi - lo), ring.weights[i] * (hi - lo));
    hi = lo;
  }
  const double q = options.radial_power;
  for (std::size_t i = 0; i < core.nodes.size(); ++i) {
    const double t = core.nodes[i];
    emit(hi * std::pow(t, q), core.weights[i] * hi * q * std::pow(t, q - 1.0));
  }
}

double graded_corner_quadrature(const std::array<Point2, 3>& tri, const std::function<double(Point2)>& integrand,
                                const GradedOptions& options) {
  std::vector<QuadraturePoint> pts;
  graded_corner_points(tri, options, pts);
  double sum = 0.0;
  for (const auto& q : pts) sum += q.weight * integrand(q.point);
  return sum;
}

double graded_sector_quadrature(const PolygonalSection& section, double radius,
                                const std::function<double(Point2)>& integrand, const GradedOptions& options) {
  if (options.singularity_order >= 2.0) {
    throw NotIntegrable("graded quadrature: rho^{-sigma} with sigma >= 2 is not integrable in 2D");
  }
  const GaussRule& ring = gauss_legendre(options.ring_order);
  const GaussRule& core = gauss_legendre(options.core_order);
  const GaussRule& angular = gauss_legendre(std::max(24, options.core_order));
  const double opening = section.opening();
  const double q = options.radial_power;

  auto angular_sum = [&](double rho) {
    double s = 0.0;
    for (std::size_t i = 0; i < angular.nodes.size(); ++i) {
      s += angular.weights[i] * integrand(point_at(section, {rho, angular.nodes[i] * opening}));
    }
    return s * opening;
  };

  double total = 0.0;
  double outer = radius;
  for (int level = 0; level < options.levels; ++level) {
    const double inner = 0.5 * outer;
    for (std::size_t i = 0; i < ring.nodes.size(); ++i) {
      const double rho = inner + ring.nodes[i] * (outer - inner);
      total += ring.weights[i] * (outer - inner) * rho * angular_sum(rho);
    }
    outer = inner;
  }
  for (std::size_t i = 0; i < core.nodes.size(); ++i) {
    const double t = core.nodes[i];
    const double rho = outer * std::pow(t, q);
    const double drho = outer * q * std::pow(t, q - 1.0);
    total += core.weights[i] * drho * rho * angular_sum(rho);
  }
  return total;
}

CornerAwareRule::CornerAwareRule(Point2 corner, GradedOptions options, double near_factor, int near_order)
    : corner_(corner), options_(options), near_factor_(near_factor), near_rule_(collapsed_rule(near_order, 1)) {}

void CornerAwareRule::points(const std::array<Point2, 3>& tri, std::vector<QuadraturePoint>& out) const {
  out.clear();
  const double diam = std::max({norm(tri[1] - tri[0]), norm(tri[2] - tri[1]), norm(tri[0] - tri[2])});
  for (int i = 0; i < 3; ++i) {
    if (norm(tri[i] - corner_) <= 1e-12 * diam) {
      graded_corner_points({tri[i], tri[(i + 1) % 3], tri[(i + 2) % 3]}, options_, out);
      return;
    }
  }
  const double dist = std::min({distance_to_segment(corner_, tri[0], tri[1]),
                                distance_to_segment(corner_, tri[1], tri[2]),
                                distance_to_segment(corner_, tri[2], tri[0])});
  if (dist < near_factor_ * diam) {
    map_rule(near_rule_, tri, out);
  } else {
    map_rule(triangle_rule_order4(), tri, out);
  }
}

}  // namespace fscm
