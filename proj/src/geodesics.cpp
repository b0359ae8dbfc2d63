#include "srmc/geodesics.hpp"

#include <algorithm>
#include <cmath>

namespace srmc {

namespace {

struct State {
  double x, y, t, theta;
};

struct Deriv {
  double x, y, t, theta;
};

// gamma' in frame coefficients for the angle theta at metric data g
void tangent_coeffs(const MetricEval& g, double theta, double& va, double& vb) {
  OrthoFrame of = ortho_frame(g);
  va = std::cos(theta) * of.p + std::sin(theta) * of.r;
  vb = std::sin(theta) * of.s;
}

Deriv deriv_at(const MetricField& G, const State& st, double hval) {
  ChartPoint p{st.x, st.y, st.t};
  MetricEval g = G.eval(p);
  OrthoFrame of = ortho_frame(g);
  double va = std::cos(st.theta) * of.p + std::sin(st.theta) * of.r;
  double vb = std::sin(st.theta) * of.s;

  // kappa = <nabla_{gamma'} e1, e2>; the gamma'(1/sqrt(g11)) term drops
  // because X is g-orthogonal to e2.
  FrameConnection fc = nabla_frame(g);
  auto dX = fc.contract(va, vb, 1.0, 0.0);
  double kappa = of.p * inner(g, dX[0], dX[1], of.r, of.s);

  Vec3 v = frame_to_coords(p, va, vb, 0.0);
  return Deriv{v.x, v.y, v.t, -kappa - hval};
}

}  // namespace

HorizontalCurve integrate_geodesic(const MetricField& G, const ChartPoint& start,
                                   double theta0, const CurvatureFn& h,
                                   double length, double step) {
  if (step <= 0.0) throw ValidationError("geodesic step must be positive");
  if (length <= 0.0) throw ValidationError("geodesic length must be positive");

  // Land on `length` exactly: equal substeps, count rounded up, so `step`
  // is an upper bound on the spacing.  Spacing stays uniform because the
  // residual stencils assume it.
  int n = std::max(1, static_cast<int>(std::ceil(length / step - 1e-9)));
  step = length / n;
  HorizontalCurve c;
  c.step = step;
  c.s.reserve(n + 1);
  c.p.reserve(n + 1);
  c.theta.reserve(n + 1);
  c.h.reserve(n + 1);

  State st{start.x, start.y, start.t, theta0};
  c.s.push_back(0.0);
  c.p.push_back(start);
  c.theta.push_back(theta0);
  c.h.push_back(h(0.0));

  for (int k = 0; k < n; ++k) {
    double s0 = k * step;
    double h0 = h(s0), hm = h(s0 + 0.5 * step), h1 = h(s0 + step);
    Deriv k1 = deriv_at(G, st, h0);
    State s2{st.x + 0.5 * step * k1.x, st.y + 0.5 * step * k1.y,
             st.t + 0.5 * step * k1.t, st.theta + 0.5 * step * k1.theta};
    Deriv k2 = deriv_at(G, s2, hm);
    State s3{st.x + 0.5 * step * k2.x, st.y + 0.5 * step * k2.y,
             st.t + 0.5 * step * k2.t, st.theta + 0.5 * step * k2.theta};
    Deriv k3 = deriv_at(G, s3, hm);
    State s4{st.x + step * k3.x, st.y + step * k3.y, st.t + step * k3.t,
             st.theta + step * k3.theta};
    Deriv k4 = deriv_at(G, s4, h1);

    st.x += step / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    st.y += step / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
    st.t += step / 6.0 * (k1.t + 2.0 * k2.t + 2.0 * k3.t + k4.t);
    st.theta += step / 6.0 * (k1.theta + 2.0 * k2.theta + 2.0 * k3.theta + k4.theta);

    c.s.push_back((k + 1) * step);
    c.p.push_back(ChartPoint{st.x, st.y, st.t});
    c.theta.push_back(st.theta);
    c.h.push_back(h1);
  }
  return c;
}

HorizontalCurve integrate_geodesic(const MetricField& G, const ChartPoint& start,
                                   double theta0, const ScalarField& h_of_s,
                                   double length, double step) {
  return integrate_geodesic(
      G, start, theta0,
      [&](double s) { return h_of_s.eval(VarMap::s(s)); }, length, step);
}

std::vector<double> geodesic_residual(const HorizontalCurve& c, const MetricField& G) {
  std::size_t n = c.size();
  if (n < 3) throw ValidationError("curve needs at least three samples");

  std::vector<MetricEval> g(n);
  std::vector<std::array<double, 2>> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = G.eval(c.p[i]);
    tangent_coeffs(g[i], c.theta[i], v[i][0], v[i][1]);
  }
  auto dv = [&](std::size_t i, int k) {
    if (i == 0) return (-3.0 * v[0][k] + 4.0 * v[1][k] - v[2][k]) / (2.0 * c.step);
    if (i == n - 1)
      return (3.0 * v[n - 1][k] - 4.0 * v[n - 2][k] + v[n - 3][k]) / (2.0 * c.step);
    return (v[i + 1][k] - v[i - 1][k]) / (2.0 * c.step);
  };

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    FrameConnection fc = nabla_frame(g[i]);
    auto gamma = fc.contract(v[i][0], v[i][1], v[i][0], v[i][1]);
    HorizontalVec jv = j_unit(g[i], HorizontalVec{c.p[i], v[i][0], v[i][1]});
    double ra = dv(i, 0) + gamma[0] + c.h[i] * jv.a;
    double rb = dv(i, 1) + gamma[1] + c.h[i] * jv.b;
    out[i] = std::sqrt(inner(g[i], ra, rb, ra, rb));
  }
  return out;
}

std::vector<double> subriemannian_check(const HorizontalCurve& c, const MetricField& G) {
  std::size_t n = c.size();
  if (n < 3) throw ValidationError("curve needs at least three samples");

  std::vector<double> out(n);
  auto dh = [&](std::size_t i) {
    if (i == 0) return (-3.0 * c.h[0] + 4.0 * c.h[1] - c.h[2]) / (2.0 * c.step);
    if (i == n - 1)
      return (3.0 * c.h[n - 1] - 4.0 * c.h[n - 2] + c.h[n - 3]) / (2.0 * c.step);
    return (c.h[i + 1] - c.h[i - 1]) / (2.0 * c.step);
  };
  for (std::size_t i = 0; i < n; ++i) {
    MetricEval g = G.eval(c.p[i]);
    double va, vb;
    tangent_coeffs(g, c.theta[i], va, vb);
    HorizontalVec gdot{c.p[i], va, vb};
    HorizontalVec tg = tau_apply(G, gdot);
    out[i] = dh(i) - inner(g, tg, gdot);
  }
  return out;
}

CompareReport compare_with_characteristic(const GraphFunction& u, const MetricField& G,
                                          const ScalarField& f, const GraphDomain& D,
                                          double a, double b, double length, double step,
                                          int window) {
  CompareReport rep;
  rep.characteristic = integrate_characteristic_arclength(u, G, D, a, b, length, step);
  const ArcCurve& arc = rep.characteristic;
  if (arc.size() < 3)
    throw NumericalError("characteristic left the domain before three samples");
  rep.H = mean_curvature_sigma(u, G, arc, window);

  // initial direction: unit Z expressed in the orthonormal frame
  HorizontalVec z0 = unit_Z(u, arc.x[0], arc.t[0], G);
  MetricEval g0 = G.eval(arc.lift[0]);
  OrthoFrame of = ortho_frame(g0);
  double beta = z0.b / of.s;
  double alpha = (z0.a - beta * of.r) / of.p;
  double theta0 = std::atan2(beta, alpha);

  // Curvature samples within half a window of either end rest on clamped,
  // one-sided fits; extend the interior values into those bands instead of
  // trusting them, and leave them out of the criticality sup.
  std::size_t trim = std::min<std::size_t>(window / 2, (arc.size() - 1) / 3);
  std::size_t lo = trim, hi = arc.size() - 1 - trim;

  std::vector<double> sig = arc.sigma, hs = rep.H;
  auto hfn = [sig, hs, lo, hi](double s) {
    if (s <= sig[lo]) return hs[lo];
    if (s >= sig[hi]) return hs[hi];
    std::size_t i = static_cast<std::size_t>((s - sig.front()) / (sig[1] - sig[0]));
    if (i + 1 >= sig.size()) i = sig.size() - 2;
    double w = (s - sig[i]) / (sig[i + 1] - sig[i]);
    return (1.0 - w) * hs[i] + w * hs[i + 1];
  };

  rep.geodesic = integrate_geodesic(G, arc.lift[0], theta0, hfn, arc.sigma.back(), step);

  std::size_t n = std::min(arc.size(), rep.geodesic.size());
  for (std::size_t i = 0; i < n; ++i) {
    const ChartPoint& pc = arc.lift[i];
    const ChartPoint& pg = rep.geodesic.p[i];
    double d = std::sqrt((pc.x - pg.x) * (pc.x - pg.x) + (pc.y - pg.y) * (pc.y - pg.y) +
                         (pc.t - pg.t) * (pc.t - pg.t));
    rep.sup_distance = std::max(rep.sup_distance, d);
    if (i < lo || i > hi) continue;
    double fv = f.eval(VarMap::xyt(pc.x, pc.y, pc.t));
    rep.sup_h_minus_f = std::max(rep.sup_h_minus_f, std::fabs(rep.H[i] - fv));
  }
  return rep;
}

}  // namespace srmc
