#include "srmc/chart.hpp"

#include <cmath>

namespace srmc {

namespace {

std::vector<Var> xyt_vars() { return {Var::X, Var::Y, Var::T}; }

MetricEval eval_entries(const ScalarField& g11, const ScalarField& g12, const ScalarField& g22,
                        const ChartPoint& p) {
  VarMap at = VarMap::xyt(p.x, p.y, p.t);
  Dual d11 = g11.eval_grad(at);
  Dual d12 = g12.eval_grad(at);
  Dual d22 = g22.eval_grad(at);
  MetricEval m;
  m.g11 = d11.v;
  m.g12 = d12.v;
  m.g22 = d22.v;
  m.Xg11 = d11.dx();
  m.Xg12 = d12.dx();
  m.Xg22 = d22.dx();
  // Y = d_y - x d_t
  m.Yg11 = d11.dy() - p.x * d11.dt();
  m.Yg12 = d12.dy() - p.x * d12.dt();
  m.Yg22 = d22.dy() - p.x * d22.dt();
  m.Tg11 = d11.dt();
  m.Tg12 = d12.dt();
  m.Tg22 = d22.dt();
  return m;
}

}  // namespace

MetricField::MetricField()
    : MetricField(ScalarField::constant(1.0), ScalarField::constant(0.0),
                  ScalarField::constant(1.0)) {}

MetricField::MetricField(ScalarField g11, ScalarField g12, ScalarField g22)
    : g11_(std::move(g11)), g12_(std::move(g12)), g22_(std::move(g22)) {
  constant_ = g11_.is_constant() && g12_.is_constant() && g22_.is_constant();
  if (constant_) {
    cached_ = eval_entries(g11_, g12_, g22_, ChartPoint{});
    if (cached_.g11 <= 0.0 || cached_.det() <= 0.0)
      throw NumericalError("metric is not positive definite");
  }
}

MetricField MetricField::heisenberg() { return MetricField(); }

MetricField MetricField::from_expressions(std::string_view g11, std::string_view g12,
                                          std::string_view g22) {
  return MetricField(ScalarField::parse_field(g11, xyt_vars()),
                     ScalarField::parse_field(g12, xyt_vars()),
                     ScalarField::parse_field(g22, xyt_vars()));
}

MetricEval MetricField::eval(const ChartPoint& p) const {
  if (constant_) return cached_;
  MetricEval m = eval_entries(g11_, g12_, g22_, p);
  if (m.g11 <= 0.0 || m.det() <= 0.0)
    throw NumericalError("metric is not positive definite");
  return m;
}

HorizontalVec j_apply(const MetricEval& g, const HorizontalVec& v) {
  // covector lambda_w = <J(v), w>: lambda = (-b/2, a/2); raise with G^{-1}
  double lx = -0.5 * v.b;
  double ly = 0.5 * v.a;
  double det = g.det();
  HorizontalVec r;
  r.base = v.base;
  r.a = (g.g22 * lx - g.g12 * ly) / det;
  r.b = (-g.g12 * lx + g.g11 * ly) / det;
  return r;
}

HorizontalVec j_unit(const MetricEval& g, const HorizontalVec& v) {
  HorizontalVec r = j_apply(g, v);
  double c = 2.0 * std::sqrt(g.det());
  r.a *= c;
  r.b *= c;
  return r;
}

double orientation_check(const MetricField& G, const ChartPoint& p, const HorizontalVec& v) {
  if (v.a == 0.0 && v.b == 0.0)
    throw ValidationError("orientation check needs a nonzero horizontal vector");
  MetricEval g = G.eval(p);
  HorizontalVec jv = j_apply(g, v);
  // omega ^ d omega = dx ^ dy ^ dt in this chart, so the value is the
  // determinant of the coordinate components of (v, J(v), T).
  Vec3 a = v.coords();
  Vec3 b = jv.coords();
  Vec3 c = frame_T();
  return a.x * (b.y * c.t - b.t * c.y) - a.y * (b.x * c.t - b.t * c.x) +
         a.t * (b.x * c.y - b.y * c.x);
}

OrthoFrame ortho_frame(const MetricEval& g) {
  OrthoFrame f;
  f.p = 1.0 / std::sqrt(g.g11);
  double det = g.det();
  f.s = std::sqrt(g.g11 / det);
  f.r = -g.g12 / std::sqrt(g.g11 * det);
  return f;
}

}  // namespace srmc
