#include "srmc/variation.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace srmc {

namespace {

ExprPtr lit(double c) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Literal;
  e->literal = c;
  return e;
}

ExprPtr bin(Op op, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Binary;
  e->op = op;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

double fval(const ScalarField& f, const ChartPoint& p) {
  return f.eval(VarMap::xyt(p.x, p.y, p.t));
}

struct PointData {
  GraphFunction::Eval e;
  ChartPoint p;
  MetricEval g;
  double W = 0.0, Q = 0.0, sqrtQ = 1.0;
};

PointData point_data(const GraphFunction& u, double x, double t, const MetricField& G) {
  PointData d;
  d.e = u.eval(x, t);
  d.p = ChartPoint{x, d.e.u, t - x * d.e.u};
  d.g = G.eval(d.p);
  d.W = d.e.ux + d.e.u * d.e.ut;
  d.Q = d.g.g22 * d.W * d.W + 2.0 * d.g.g12 * d.W + d.g.g11;
  if (d.Q <= 0.0) throw NumericalError("area radicand not positive");
  d.sqrtQ = std::sqrt(d.Q);
  return d;
}

double slope_M(const PointData& d) {
  return (d.g.g22 * d.W + d.g.g12) / d.sqrtQ;
}

void check_compact_support(const GraphFunction& v, const GraphDomain& D) {
  constexpr int kEdgeSamples = 129;
  constexpr double kTol = 1e-9;
  double worst = 0.0;
  for (int i = 0; i < kEdgeSamples; ++i) {
    double a = static_cast<double>(i) / (kEdgeSamples - 1);
    double x = D.x0 + a * D.width();
    double t = D.t0 + a * D.height();
    worst = std::max(worst, std::fabs(v.value(x, D.t0)));
    worst = std::max(worst, std::fabs(v.value(x, D.t1)));
    worst = std::max(worst, std::fabs(v.value(D.x0, t)));
    worst = std::max(worst, std::fabs(v.value(D.x1, t)));
  }
  if (worst > kTol)
    throw ValidationError("test function does not vanish on the domain edge");
}

}  // namespace

Coefficients coefficients(const GraphFunction& u, double x, double t,
                          const MetricField& G, const ScalarField& f) {
  PointData d = point_data(u, x, t, G);
  Coefficients c;
  c.W = d.W;
  c.sqrtQ = d.sqrtQ;
  c.detG = d.g.det();
  c.K1 = (d.g.Yg22 * d.W * d.W + 2.0 * d.g.Yg12 * d.W + d.g.Yg11) / (2.0 * d.sqrtQ);
  c.M = slope_M(d);
  c.K = c.K1 - fval(f, d.p) * c.detG;
  return c;
}

double area(const GraphFunction& u, const MetricField& G, const GraphDomain& D,
            const Quadrature& quad) {
  return integrate(quad, D, [&](double x, double t) {
    return point_data(u, x, t, G).sqrtQ;
  });
}

double volume_derivative(const ScalarField& f, const MetricField& G,
                         const GraphFunction& u, const GraphFunction& v,
                         const GraphDomain& D, const Quadrature& quad) {
  return integrate(quad, D, [&](double x, double t) {
    PointData d = point_data(u, x, t, G);
    return fval(f, d.p) * d.g.det() * v.value(x, t);
  });
}

double first_variation(const GraphFunction& u, const GraphFunction& v,
                       const ScalarField& f, const MetricField& G,
                       const GraphDomain& D, const Quadrature& quad) {
  check_compact_support(v, D);
  return integrate(quad, D, [&](double x, double t) {
    Coefficients c = coefficients(u, x, t, G, f);
    GraphFunction::Eval ue = u.eval(x, t);
    GraphFunction::Eval ve = v.eval(x, t);
    return c.K * ve.u + c.M * (ve.ux + ue.u * ve.ut + ve.u * ue.ut);
  });
}

GraphFunction axpy(const GraphFunction& u, double c, const GraphFunction& v) {
  if (u.smooth() && v.smooth()) {
    ExprPtr sum = bin(Op::Add, u.field().expr(),
                      bin(Op::Mul, lit(c), v.field().expr()));
    return GraphFunction::from_expression(
        ScalarField(sum, {Var::X, Var::T}));
  }
  const GridField* base = u.grid() ? u.grid() : v.grid();
  if (u.grid() && v.grid()) {
    const GridField& a = *u.grid();
    const GridField& b = *v.grid();
    if (a.nx != b.nx || a.nt != b.nt || a.x0 != b.x0 || a.x1 != b.x1 ||
        a.t0 != b.t0 || a.t1 != b.t1)
      throw ValidationError("grid shapes differ in graph combination");
  }
  GridField out = *base;
  for (int i = 0; i < out.nx; ++i)
    for (int j = 0; j < out.nt; ++j)
      out.at(i, j) = u.value(out.xcoord(i), out.tcoord(j)) +
                     c * v.value(out.xcoord(i), out.tcoord(j));
  return GraphFunction::from_grid(std::move(out));
}

double fd_variation_oracle(const GraphFunction& u, const GraphFunction& v,
                           const ScalarField& f, const MetricField& G,
                           const GraphDomain& D, const Quadrature& quad,
                           double h) {
  if (h <= 0.0) throw ValidationError("difference step must be positive");
  double ap = area(axpy(u, h, v), G, D, quad);
  double am = area(axpy(u, -h, v), G, D, quad);
  return (ap - am) / (2.0 * h) - volume_derivative(f, G, u, v, D, quad);
}

VariationReport variation_report(const GraphFunction& u, const GraphFunction& v,
                                 const ScalarField& f, const MetricField& G,
                                 const GraphDomain& D, const Quadrature& quad,
                                 double h) {
  VariationReport r;
  r.formula = first_variation(u, v, f, G, D, quad);
  r.oracle = fd_variation_oracle(u, v, f, G, D, quad, h);
  r.abs_gap = std::fabs(r.formula - r.oracle);
  r.rel_gap = r.oracle != 0.0 ? r.abs_gap / std::fabs(r.oracle)
                              : (r.formula == 0.0 ? 0.0 : HUGE_VAL);
  return r;
}

double mean_curvature_at(const GraphFunction& u, double x, double t,
                         const MetricField& G, const ScalarField& f,
                         double step) {
  if (step <= 0.0) throw ValidationError("curvature step must be positive");
  Coefficients c0 = coefficients(u, x, t, G, f);
  double u0 = u.value(x, t);
  double mp = slope_M(point_data(u, x + step, t + step * u0, G));
  double mm = slope_M(point_data(u, x - step, t - step * u0, G));
  double dMds = (mp - mm) / (2.0 * step);
  return (c0.K1 - dMds) / std::sqrt(c0.detG);
}

double geometric_first_variation(const GraphFunction& u, const GraphFunction& phi,
                                 const ScalarField& f, const MetricField& G,
                                 const GraphDomain& D, const Quadrature& quad,
                                 double step) {
  check_compact_support(phi, D);
  return integrate(quad, D, [&](double x, double t) {
    ChartPoint p = embed(u, x, t);
    MetricEval g = G.eval(p);
    double H = mean_curvature_at(u, x, t, G, f, step);
    HorizontalVec normal = nu_h(u, x, t, G);
    double pairing = inner(g, 0.0, phi.value(x, t), normal.a, normal.b);
    double dSigma = riemannian_area_element(u, x, t, G);
    return -(H - fval(f, p)) * n_h_norm(u, x, t, G) * pairing * dSigma;
  });
}

}  // namespace srmc
