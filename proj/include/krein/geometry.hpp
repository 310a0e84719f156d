#pragma once

#include <vector>

#include "krein/types.hpp"

namespace krein {

enum class CurveKind { Circle, Ellipse, Kite };

// Smooth closed curve x(t), t in [0, 2 pi), counterclockwise.
struct CurveParam {
  CurveKind kind = CurveKind::Circle;
  double a = 1.0;  // circle radius, or ellipse semi-axis along x
  double b = 1.0;  // ellipse semi-axis along y

  static CurveParam circle(double radius);
  static CurveParam ellipse(double semi_x, double semi_y);
  static CurveParam kite();

  Point x(double t) const;
  Point dx(double t) const;
  Point ddx(double t) const;
};

// Parameter interval [t0, t1] of an arc and its graded node count.
struct ArcSpec {
  double t0 = 0.0;
  double t1 = kPi;
  int M = 64;

  double mid() const { return 0.5 * (t0 + t1); }
  double half_width() const { return 0.5 * (t1 - t0); }
};

// Nodes, speeds, outward normals and weights of a discretized curve or arc.
//
// For arcs, `theta` holds the cosine-substitution angles, `jacobian` the
// factor |dx/dtheta|, `weight` the trapezoid-in-theta weights (pi/M)|dx/dtheta|
// used by the Nystrom operators, and `fejer_weight` the Fejer weights that
// integrate smooth functions on the arc to spectral accuracy.
struct BoundaryGrid {
  CurveParam curve;
  bool is_arc = false;
  ArcSpec arc;

  RVec t;
  RVec theta;
  Eigen::Matrix2Xd x;
  Eigen::Matrix2Xd dx;
  Eigen::Matrix2Xd ddx;
  RVec speed;
  Eigen::Matrix2Xd normal;
  RVec curvature;
  RVec weight;
  RVec jacobian;
  RVec fejer_weight;

  int size() const { return static_cast<int>(t.size()); }
  Point node(int j) const { return x.col(j); }
  Point nu(int j) const { return normal.col(j); }
  double length() const;
  double mean_spacing() const;
};

BoundaryGrid discretize_curve(const CurveParam& curve, int n_nodes);

BoundaryGrid graded_arc_grid(const CurveParam& curve, const ArcSpec& arc);

// Whether x lies in the bounded component enclosed by the curve.
bool inside_curve(const CurveParam& curve, const Point& x);

// Distance from x to the discrete node set.
double distance_to_nodes(const BoundaryGrid& grid, const Point& x);

}  // namespace krein
