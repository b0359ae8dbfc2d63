#pragma once
// Contact chart on R^3 with coordinates (x, y, t):
//
//   contact form   omega = dt + x dy
//   frame          X = d_x,  Y = d_y - x d_t,  T = d_t  (Reeb)
//   bracket        [X, Y] = -T
//
// The horizontal distribution is span{X, Y}; a metric G on it is given by
// three scalar fields g11, g12, g22 of (x, y, t).  The ambient Riemannian
// metric extends G by declaring T unit and orthogonal to the horizontal
// plane.  J is the skew part of v -> D_v T; the normalized rotation
// j = J / |J| turns a horizontal unit vector by a right angle.

#include <array>
#include <cmath>
#include <string_view>

#include "srmc/error.hpp"
#include "srmc/expr.hpp"

namespace srmc {

struct ChartPoint {
  double x = 0.0, y = 0.0, t = 0.0;
};

struct Vec3 {
  double x = 0.0, y = 0.0, t = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, t + o.t}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, t - o.t}; }
  Vec3 operator*(double c) const { return {c * x, c * y, c * t}; }
};

inline Vec3 frame_X() { return {1.0, 0.0, 0.0}; }
inline Vec3 frame_Y(const ChartPoint& p) { return {0.0, 1.0, -p.x}; }
inline Vec3 frame_T() { return {0.0, 0.0, 1.0}; }

inline double omega(const ChartPoint& p, const Vec3& v) { return v.t + p.x * v.y; }

// v = a X + b Y + c T at p; c = omega(v).
inline Vec3 frame_to_coords(const ChartPoint& p, double a, double b, double c) {
  return {a, b, c - p.x * b};
}
inline std::array<double, 3> coords_to_frame(const ChartPoint& p, const Vec3& v) {
  return {v.x, v.y, omega(p, v)};
}

// Metric data at a point: entries plus their frame derivatives
// X(g) = d_x g and Y(g) = d_y g - x d_t g, and the plain d_t derivative.
struct MetricEval {
  double g11 = 1.0, g12 = 0.0, g22 = 1.0;
  double Xg11 = 0.0, Xg12 = 0.0, Xg22 = 0.0;
  double Yg11 = 0.0, Yg12 = 0.0, Yg22 = 0.0;
  double Tg11 = 0.0, Tg12 = 0.0, Tg22 = 0.0;

  double det() const { return g11 * g22 - g12 * g12; }

  // frame derivative of entry (1,1)=0 (1,2)=1 (2,2)=2 along frame leg 0,1,2
  double entry(int e) const { return e == 0 ? g11 : (e == 1 ? g12 : g22); }
  double frame_deriv(int leg, int e) const {
    switch (leg) {
      case 0: return e == 0 ? Xg11 : (e == 1 ? Xg12 : Xg22);
      case 1: return e == 0 ? Yg11 : (e == 1 ? Yg12 : Yg22);
      default: return e == 0 ? Tg11 : (e == 1 ? Tg12 : Tg22);
    }
  }
};

class MetricField {
 public:
  MetricField();  // heisenberg
  MetricField(ScalarField g11, ScalarField g12, ScalarField g22);

  static MetricField heisenberg();
  static MetricField from_expressions(std::string_view g11, std::string_view g12,
                                      std::string_view g22);

  // Throws NumericalError when G is not positive definite at p.
  MetricEval eval(const ChartPoint& p) const;

  bool is_constant() const { return constant_; }
  const ScalarField& g11() const { return g11_; }
  const ScalarField& g12() const { return g12_; }
  const ScalarField& g22() const { return g22_; }

 private:
  ScalarField g11_, g12_, g22_;
  bool constant_ = false;
  MetricEval cached_;
};

// Horizontal vector by frame coefficients: v = a X + b Y at base.
struct HorizontalVec {
  ChartPoint base;
  double a = 0.0, b = 0.0;

  Vec3 coords() const { return frame_to_coords(base, a, b, 0.0); }
};

inline double inner(const MetricEval& g, double a1, double b1, double a2, double b2) {
  return g.g11 * a1 * a2 + g.g12 * (a1 * b2 + b1 * a2) + g.g22 * b1 * b2;
}
inline double inner(const MetricEval& g, const HorizontalVec& u, const HorizontalVec& v) {
  return inner(g, u.a, u.b, v.a, v.b);
}
inline double norm(const MetricEval& g, const HorizontalVec& v) {
  return std::sqrt(inner(g, v, v));
}

// J from 2 <J(v), w> = -<[v, w], T>; with [X, Y] = -T this is the covector
// (-b/2, a/2) raised by G.  |J(v)| = |v| / (2 sqrt(det G)).
HorizontalVec j_apply(const MetricEval& g, const HorizontalVec& v);

// Normalized rotation: j(v) = 2 sqrt(det G) J(v); preserves length, j^2 = -id.
HorizontalVec j_unit(const MetricEval& g, const HorizontalVec& v);

// (omega ^ d omega)(v, J(v), T); positive for horizontal v != 0.
double orientation_check(const MetricField& G, const ChartPoint& p, const HorizontalVec& v);

// Gram-Schmidt orthonormal horizontal frame, e1 along X:
//   e1 = p X,   e2 = r X + s Y,   j(e1) = e2.
struct OrthoFrame {
  double p = 1.0, r = 0.0, s = 1.0;
};
OrthoFrame ortho_frame(const MetricEval& g);

}  // namespace srmc
