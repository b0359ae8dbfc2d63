#include "srmc/graph.hpp"

#include <algorithm>
#include <cmath>

namespace srmc {

GraphFunction GraphFunction::from_expression(std::string_view expr) {
  return from_expression(ScalarField::parse_field(expr, {Var::X, Var::T}));
}

GraphFunction GraphFunction::from_expression(ScalarField field) {
  GraphFunction g;
  g.field_ = std::move(field);
  return g;
}

GraphFunction GraphFunction::from_grid(GridField grid) {
  GraphFunction g;
  g.grid_ = std::make_shared<GridField>(std::move(grid));
  return g;
}

GraphFunction::Eval GraphFunction::eval(double x, double t) const {
  Eval e;
  if (!grid_) {
    if (!field_.valid()) throw ValidationError("graph function is empty");
    Dual d = field_.eval_grad(VarMap::xt(x, t));
    e.u = d.v;
    e.ux = d.dx();
    e.ut = d.dt();
    return e;
  }
  const GridField& g = *grid_;
  double hx = g.hx(), ht = g.ht();
  double fx = (x - g.x0) / hx;
  double ft = (t - g.t0) / ht;
  // clamp into the covered rectangle; the last cell owns its upper edge
  int i = std::clamp(static_cast<int>(std::floor(fx)), 0, g.nx - 2);
  int j = std::clamp(static_cast<int>(std::floor(ft)), 0, g.nt - 2);
  double xi = fx - i;
  double et = ft - j;
  const double kEdgeEps = 1e-12;
  e.on_cell_edge = (std::fabs(xi - std::round(xi)) < kEdgeEps && g.nx > 2) ||
                   (std::fabs(et - std::round(et)) < kEdgeEps && g.nt > 2);
  double u00 = g.at(i, j), u10 = g.at(i + 1, j), u01 = g.at(i, j + 1), u11 = g.at(i + 1, j + 1);
  e.u = (1 - xi) * (1 - et) * u00 + xi * (1 - et) * u10 + (1 - xi) * et * u01 + xi * et * u11;
  e.ux = ((1 - et) * (u10 - u00) + et * (u11 - u01)) / hx;
  e.ut = ((1 - xi) * (u01 - u00) + xi * (u11 - u10)) / ht;
  return e;
}

double GraphFunction::lipschitz_bound(const GraphDomain& d) const {
  if (grid_) {
    const GridField& g = *grid_;
    double m = 0.0;
    for (int i = 0; i + 1 < g.nx; ++i)
      for (int j = 0; j < g.nt; ++j)
        m = std::max(m, std::fabs(g.at(i + 1, j) - g.at(i, j)) / g.hx());
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j + 1 < g.nt; ++j)
        m = std::max(m, std::fabs(g.at(i, j + 1) - g.at(i, j)) / g.ht());
    return m;
  }
  const int kSamples = 33;
  double m = 0.0;
  for (int i = 0; i < kSamples; ++i)
    for (int j = 0; j < kSamples; ++j) {
      double x = d.x0 + d.width() * i / (kSamples - 1);
      double t = d.t0 + d.height() * j / (kSamples - 1);
      Eval e = eval(x, t);
      m = std::max({m, std::fabs(e.ux), std::fabs(e.ut)});
    }
  return m;
}

ChartPoint embed(const GraphFunction& u, double x, double t) {
  double uv = u.value(x, t);
  return ChartPoint{x, uv, t - x * uv};
}

TangentPair tangents(const GraphFunction& u, double x, double t) {
  GraphFunction::Eval e = u.eval(x, t);
  TangentPair tp;
  tp.on_cell_edge = e.on_cell_edge;
  tp.e1_frame = {1.0, e.ux, -e.u};
  tp.e2_frame = {0.0, e.ut, 1.0};
  tp.e1 = Vec3{1.0, e.ux, -e.u - x * e.ux};
  tp.e2 = Vec3{0.0, e.ut, 1.0 - x * e.ut};
  return tp;
}

double char_slope(const GraphFunction& u, double x, double t) {
  GraphFunction::Eval e = u.eval(x, t);
  return e.ux + e.u * e.ut;
}

namespace {

struct SlopeData {
  ChartPoint p;
  MetricEval g;
  double W;
  double Q;  // g22 W^2 + 2 g12 W + g11
};

SlopeData slope_data(const GraphFunction& u, double x, double t, const MetricField& G) {
  GraphFunction::Eval e = u.eval(x, t);
  SlopeData d;
  d.p = ChartPoint{x, e.u, t - x * e.u};
  d.g = G.eval(d.p);
  d.W = e.ux + e.u * e.ut;
  d.Q = d.g.g22 * d.W * d.W + 2.0 * d.g.g12 * d.W + d.g.g11;
  if (d.Q <= 0.0) throw NumericalError("degenerate characteristic direction");
  return d;
}

}  // namespace

HorizontalVec unit_Z(const GraphFunction& u, double x, double t, const MetricField& G) {
  SlopeData d = slope_data(u, x, t, G);
  double inv = 1.0 / std::sqrt(d.Q);
  return HorizontalVec{d.p, inv, d.W * inv};
}

double area_element(const GraphFunction& u, double x, double t, const MetricField& G) {
  return std::sqrt(slope_data(u, x, t, G).Q);
}

HorizontalVec nu_h(const GraphFunction& u, double x, double t, const MetricField& G) {
  SlopeData d = slope_data(u, x, t, G);
  HorizontalVec z{d.p, 1.0 / std::sqrt(d.Q), d.W / std::sqrt(d.Q)};
  HorizontalVec jz = j_unit(d.g, z);
  return HorizontalVec{d.p, -jz.a, -jz.b};
}

namespace {

struct NormalData {
  double nh;    // |N_h|
  double dsig;  // Riemannian area element in the (x, t) parameters
};

NormalData normal_data(const GraphFunction& u, double x, double t, const MetricField& G) {
  GraphFunction::Eval e = u.eval(x, t);
  ChartPoint p{x, e.u, t - x * e.u};
  MetricEval g = G.eval(p);
  double W = e.ux + e.u * e.ut;

  // Frame metric is diag(G, 1).  With E1 = (1, ux, -u), E2 = (0, ut, 1) the
  // Euclidean cross product of frame coefficients is c = (W, -1, ut); the
  // normal direction solves H n ~ c.
  double c1 = W, c2 = -1.0, c3 = e.ut;
  double det = g.det();
  double n1 = (g.g22 * c1 - g.g12 * c2) / det;
  double n2 = (-g.g12 * c1 + g.g11 * c2) / det;
  double n3 = c3;
  // |n|_H^2 = c^T H^{-1} c
  double q = c1 * n1 + c2 * n2 + c3 * n3;
  if (q <= 0.0) throw NumericalError("degenerate tangent plane");
  double inv = 1.0 / std::sqrt(q);

  NormalData nd;
  double h1 = n1 * inv, h2 = n2 * inv;
  nd.nh = std::sqrt(inner(g, h1, h2, h1, h2));

  // Gram determinant of (E1, E2): det(H) * c^T H^{-1} c with det(H) = det G.
  nd.dsig = std::sqrt(det * q);
  return nd;
}

}  // namespace

double n_h_norm(const GraphFunction& u, double x, double t, const MetricField& G) {
  return normal_data(u, x, t, G).nh;
}

double riemannian_area_element(const GraphFunction& u, double x, double t,
                               const MetricField& G) {
  return normal_data(u, x, t, G).dsig;
}

double zx_check(const GraphFunction& u, double x, double t, const MetricField& G) {
  SlopeData d = slope_data(u, x, t, G);
  double invs = 1.0 / std::sqrt(d.Q);
  double za = invs, zb = d.W * invs;
  double ZX = d.g.g11 * za + d.g.g12 * zb;  // <Z, X>
  double ZY = d.g.g12 * za + d.g.g22 * zb;  // <Z, Y>
  double det = d.g.det();

  if (!(ZY * ZY < d.g.g22))
    throw NumericalError("characteristic pairing violates the Schwarz bound");

  double r1 = std::fabs(1.0 - (d.g.g22 * ZX * ZX - 2.0 * d.g.g12 * ZX * ZY + d.g.g11 * ZY * ZY) / det);
  double r2 = std::fabs(ZX - (d.g.g12 * ZY + std::sqrt(det * (d.g.g22 - ZY * ZY))) / d.g.g22);
  return std::max(r1, r2);
}

}  // namespace srmc
