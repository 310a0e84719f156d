#include "krein/geometry.hpp"

#include <cmath>
#include <limits>

namespace krein {

CurveParam CurveParam::circle(double radius) {
  if (!(radius > 0.0)) throw RegularityError("circle: radius must be positive");
  return {CurveKind::Circle, radius, radius};
}

CurveParam CurveParam::ellipse(double semi_x, double semi_y) {
  if (!(semi_x > 0.0 && semi_y > 0.0)) throw RegularityError("ellipse: semi-axes must be positive");
  return {CurveKind::Ellipse, semi_x, semi_y};
}

CurveParam CurveParam::kite() { return {CurveKind::Kite, 1.0, 1.0}; }

Point CurveParam::x(double t) const {
  switch (kind) {
    case CurveKind::Circle:
    case CurveKind::Ellipse:
      return {a * std::cos(t), b * std::sin(t)};
    case CurveKind::Kite:
      return {std::cos(t) + 0.65 * std::cos(2.0 * t) - 0.65, 1.5 * std::sin(t)};
  }
  return {};
}

Point CurveParam::dx(double t) const {
  switch (kind) {
    case CurveKind::Circle:
    case CurveKind::Ellipse:
      return {-a * std::sin(t), b * std::cos(t)};
    case CurveKind::Kite:
      return {-std::sin(t) - 1.3 * std::sin(2.0 * t), 1.5 * std::cos(t)};
  }
  return {};
}

Point CurveParam::ddx(double t) const {
  switch (kind) {
    case CurveKind::Circle:
    case CurveKind::Ellipse:
      return {-a * std::cos(t), -b * std::sin(t)};
    case CurveKind::Kite:
      return {-std::cos(t) - 2.6 * std::cos(2.0 * t), -1.5 * std::sin(t)};
  }
  return {};
}

double BoundaryGrid::length() const {
  return is_arc ? fejer_weight.sum() : weight.sum();
}

double BoundaryGrid::mean_spacing() const { return length() / size(); }

namespace {

void fill_point_data(BoundaryGrid& g) {
  const int n = static_cast<int>(g.t.size());
  g.x.resize(2, n);
  g.dx.resize(2, n);
  g.ddx.resize(2, n);
  g.speed.resize(n);
  g.normal.resize(2, n);
  g.curvature.resize(n);
  for (int j = 0; j < n; ++j) {
    const double t = g.t(j);
    g.x.col(j) = g.curve.x(t);
    g.dx.col(j) = g.curve.dx(t);
    g.ddx.col(j) = g.curve.ddx(t);
    const double s = g.dx.col(j).norm();
    if (s < 1e-10) throw RegularityError("discretize_curve: parametrization speed below 1e-10");
    g.speed(j) = s;
    g.normal.col(j) = Point(g.dx(1, j), -g.dx(0, j)) / s;
    const double cross = g.dx(0, j) * g.ddx(1, j) - g.dx(1, j) * g.ddx(0, j);
    g.curvature(j) = cross / (s * s * s);
  }
}

}  // namespace

BoundaryGrid discretize_curve(const CurveParam& curve, int n_nodes) {
  if (n_nodes < 8 || n_nodes % 2 != 0) {
    throw std::invalid_argument("discretize_curve: node count must be even and >= 8");
  }
  BoundaryGrid g;
  g.curve = curve;
  g.t.resize(n_nodes);
  for (int j = 0; j < n_nodes; ++j) g.t(j) = 2.0 * kPi * j / n_nodes;
  fill_point_data(g);
  g.weight = g.speed * (2.0 * kPi / n_nodes);
  g.jacobian = g.speed;
  g.fejer_weight = g.weight;
  return g;
}

BoundaryGrid graded_arc_grid(const CurveParam& curve, const ArcSpec& arc) {
  if (arc.M < 4) throw std::invalid_argument("graded_arc_grid: M must be >= 4");
  if (!(arc.t1 > arc.t0) || !(arc.t1 - arc.t0 < 2.0 * kPi)) {
    throw std::invalid_argument("graded_arc_grid: arc aperture must lie in (0, 2 pi)");
  }
  const int M = arc.M;
  BoundaryGrid g;
  g.curve = curve;
  g.is_arc = true;
  g.arc = arc;
  g.t.resize(M);
  g.theta.resize(M);
  const double hw = arc.half_width();
  for (int j = 0; j < M; ++j) {
    g.theta(j) = (2.0 * j + 1.0) * kPi / (2.0 * M);
    g.t(j) = arc.mid() + hw * std::cos(g.theta(j));
  }
  fill_point_data(g);
  g.jacobian.resize(M);
  g.weight.resize(M);
  g.fejer_weight.resize(M);
  for (int j = 0; j < M; ++j) {
    g.jacobian(j) = hw * g.speed(j) * std::sin(g.theta(j));
    g.weight(j) = kPi / M * g.jacobian(j);
    double s = 0.0;
    for (int k = 1; k <= M / 2; ++k) {
      s += std::cos(2.0 * k * g.theta(j)) / (4.0 * k * k - 1.0);
    }
    g.fejer_weight(j) = 2.0 / M * (1.0 - 2.0 * s) * hw * g.speed(j);
  }
  return g;
}

bool inside_curve(const CurveParam& curve, const Point& p) {
  switch (curve.kind) {
    case CurveKind::Circle:
    case CurveKind::Ellipse: {
      const double u = p.x() / curve.a, v = p.y() / curve.b;
      return u * u + v * v < 1.0;
    }
    case CurveKind::Kite: {
      // Winding number of a fine polygon.
      const int n = 4096;
      double wind = 0.0;
      Point prev = curve.x(0.0) - p;
      for (int j = 1; j <= n; ++j) {
        const Point cur = curve.x(2.0 * kPi * j / n) - p;
        wind += std::atan2(prev.x() * cur.y() - prev.y() * cur.x(), prev.dot(cur));
        prev = cur;
      }
      return std::abs(wind) > kPi;
    }
  }
  return false;
}

double distance_to_nodes(const BoundaryGrid& grid, const Point& p) {
  double d = std::numeric_limits<double>::infinity();
  for (int j = 0; j < grid.size(); ++j) d = std::min(d, (grid.node(j) - p).norm());
  return d;
}

}  // namespace krein
