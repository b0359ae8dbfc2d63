#include "srmc/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "srmc/minimize.hpp"

namespace srmc {

namespace {

double rk4_step(const GraphFunction& u, double s, double t, double h) {
  double k1 = u.value(s, t);
  double k2 = u.value(s + 0.5 * h, t + 0.5 * h * k1);
  double k3 = u.value(s + 0.5 * h, t + 0.5 * h * k2);
  double k4 = u.value(s + h, t + h * k3);
  return t + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

ChartPoint lift_point(const GraphFunction& u, double s, double t) {
  double uv = u.value(s, t);
  return ChartPoint{s, uv, t - s * uv};
}

// march |n| steps of signed size h from (a, b); appends (s, t) pairs,
// excluding the start point; returns true if clipped at the domain edge
bool march(const GraphFunction& u, const GraphDomain& D, double a, double b,
           double h, int n, std::vector<double>& s_out, std::vector<double>& t_out) {
  double s = a, t = b;
  for (int k = 0; k < n; ++k) {
    double tn = rk4_step(u, s, t, h);
    double sn = s + h;
    if (!D.contains(sn, tn)) return true;
    s_out.push_back(sn);
    t_out.push_back(tn);
    s = sn;
    t = tn;
  }
  return false;
}

int steps_within(double span, double step) {
  return span <= 0.0 ? 0 : static_cast<int>(std::floor(span / step + 1e-9));
}

}  // namespace

CharCurve integrate_characteristic(const GraphFunction& u, const GraphDomain& D,
                                   double a, double b, double s0, double s1,
                                   double step) {
  if (step <= 0.0) throw ValidationError("ODE step must be positive");
  if (!D.contains(a, b)) throw ValidationError("characteristic seed outside the domain");
  if (s0 > a || s1 < a) throw ValidationError("parameter range must contain the seed");

  std::vector<double> sb, tb, sf, tf;
  bool clip_b = march(u, D, a, b, -step, steps_within(a - s0, step), sb, tb);
  bool clip_f = march(u, D, a, b, step, steps_within(s1 - a, step), sf, tf);

  CharCurve c;
  c.a = a;
  c.b = b;
  c.step = step;
  c.clipped = clip_b || clip_f;
  c.ia = static_cast<int>(sb.size());
  c.s.reserve(sb.size() + 1 + sf.size());
  c.t.reserve(c.s.capacity());
  for (std::size_t i = sb.size(); i-- > 0;) {
    c.s.push_back(sb[i]);
    c.t.push_back(tb[i]);
  }
  c.s.push_back(a);
  c.t.push_back(b);
  c.s.insert(c.s.end(), sf.begin(), sf.end());
  c.t.insert(c.t.end(), tf.begin(), tf.end());

  c.slope.reserve(c.s.size());
  c.lift.reserve(c.s.size());
  for (std::size_t i = 0; i < c.s.size(); ++i) {
    c.slope.push_back(u.value(c.s[i], c.t[i]));
    c.lift.push_back(lift_point(u, c.s[i], c.t[i]));
  }
  return c;
}

double horizontality_residual(const CharCurve& c, const GraphFunction& u) {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    double h = c.s[i + 1] - c.s[i];
    // cubic Hermite on the segment, evaluated at its midpoint
    double tm = 0.5 * (c.t[i] + c.t[i + 1]) + 0.125 * h * (c.slope[i] - c.slope[i + 1]);
    double dm = 1.5 * (c.t[i + 1] - c.t[i]) / h - 0.25 * (c.slope[i] + c.slope[i + 1]);
    worst = std::max(worst, std::fabs(dm - u.value(c.s[i] + 0.5 * h, tm)));
  }
  return worst;
}

FoliationFamily foliate_family(const GraphFunction& u, const GraphDomain& D,
                               double a, double b, const std::vector<double>& eps,
                               double s0, double s1, double step) {
  if (eps.size() < 2) throw ValidationError("family needs at least two offsets");
  for (std::size_t k = 1; k < eps.size(); ++k)
    if (eps[k] <= eps[k - 1])
      throw ValidationError("family offsets must be strictly increasing");

  FoliationFamily fam;
  fam.eps = eps;
  fam.curves.reserve(eps.size());
  for (double e : eps)
    fam.curves.push_back(integrate_characteristic(u, D, a, b + e, s0, s1, step));

  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto aligned = [&](int m, int offset) -> const double* {
    const CharCurve& cm = fam.curves[m];
    int j = offset + cm.ia;
    if (j < 0 || j >= static_cast<int>(cm.size())) return nullptr;
    return &cm.t[static_cast<std::size_t>(j)];
  };

  fam.min_dt_deps = std::numeric_limits<double>::infinity();
  fam.dt_deps.resize(fam.curves.size());
  int n = static_cast<int>(fam.curves.size());
  for (int k = 0; k < n; ++k) {
    const CharCurve& ck = fam.curves[k];
    fam.dt_deps[k].assign(ck.size(), nan);
    for (int i = 0; i < static_cast<int>(ck.size()); ++i) {
      int offset = i - ck.ia;
      const double* lo = k > 0 ? aligned(k - 1, offset) : nullptr;
      const double* hi = k + 1 < n ? aligned(k + 1, offset) : nullptr;
      double d;
      if (lo && hi)
        d = (*hi - *lo) / (eps[k + 1] - eps[k - 1]);
      else if (hi)
        d = (*hi - ck.t[i]) / (eps[k + 1] - eps[k]);
      else if (lo)
        d = (ck.t[i] - *lo) / (eps[k] - eps[k - 1]);
      else
        continue;
      fam.dt_deps[k][i] = d;
      fam.min_dt_deps = std::min(fam.min_dt_deps, d);
    }
  }

  fam.min_gap = std::numeric_limits<double>::infinity();
  for (int k = 0; k + 1 < n; ++k) {
    const CharCurve& ck = fam.curves[k];
    for (int i = 0; i < static_cast<int>(ck.size()); ++i) {
      const double* hi = aligned(k + 1, i - ck.ia);
      if (hi) fam.min_gap = std::min(fam.min_gap, *hi - ck.t[i]);
    }
  }
  return fam;
}

namespace {

struct CurveGeometry {
  std::vector<MetricEval> g;
  std::vector<std::array<double, 2>> z;    // unit tangent, frame coefficients
  std::vector<std::array<double, 2>> cov;  // nabla_z z
  std::vector<double> H;
};

std::vector<double> smoothed_slopes(const std::vector<double>& w, int window) {
  if (window <= 1) return w;
  int r = window / 2;
  int n = static_cast<int>(w.size());
  std::vector<double> out(w.size());
  for (int i = 0; i < n; ++i) {
    int lo = std::max(0, i - r), hi = std::min(n - 1, i + r);
    double s = 0.0;
    for (int j = lo; j <= hi; ++j) s += w[j];
    out[i] = s / (hi - lo + 1);
  }
  return out;
}

// param_speed[i] = d sigma / d param at sample i (1 when already arclength)
CurveGeometry curve_geometry(const MetricField& G,
                             const std::vector<ChartPoint>& pts,
                             const std::vector<double>& W, double h,
                             bool arclength_param, int window = 0) {
  std::size_t n = pts.size();
  if (n < 3) throw ValidationError("curve needs at least three samples");
  CurveGeometry cg;
  cg.g.reserve(n);
  cg.z.reserve(n);
  std::vector<double> speed(n);
  for (std::size_t i = 0; i < n; ++i) {
    MetricEval g = G.eval(pts[i]);
    double Q = g.g22 * W[i] * W[i] + 2.0 * g.g12 * W[i] + g.g11;
    if (Q <= 0.0) throw NumericalError("degenerate characteristic direction");
    double sq = std::sqrt(Q);
    cg.g.push_back(g);
    cg.z.push_back({1.0 / sq, W[i] / sq});
    speed[i] = arclength_param ? 1.0 : sq;
  }

  cg.cov.resize(n);
  cg.H.resize(n);
  // Grid-backed slopes carry a cell-scale sawtooth whose difference
  // quotients blow up as O(sawtooth/h); a least-squares line over the
  // window averages the sawtooth out instead of differencing across it.
  int r = window / 2;
  auto dz = [&](std::size_t i, int c) {
    if (r >= 1) {
      int lo = std::max(0, static_cast<int>(i) - r);
      int hi = std::min(static_cast<int>(n) - 1, static_cast<int>(i) + r);
      if (hi - lo >= 2) {
        double jbar = 0.5 * (lo + hi), sjj = 0.0, sjz = 0.0;
        for (int j = lo; j <= hi; ++j) {
          double d = j - jbar;
          sjj += d * d;
          sjz += d * cg.z[static_cast<std::size_t>(j)][c];
        }
        return sjz / (sjj * h);
      }
    }
    if (i == 0) return (-3.0 * cg.z[0][c] + 4.0 * cg.z[1][c] - cg.z[2][c]) / (2.0 * h);
    if (i == n - 1)
      return (3.0 * cg.z[n - 1][c] - 4.0 * cg.z[n - 2][c] + cg.z[n - 3][c]) / (2.0 * h);
    return (cg.z[i + 1][c] - cg.z[i - 1][c]) / (2.0 * h);
  };
  for (std::size_t i = 0; i < n; ++i) {
    FrameConnection fc = nabla_frame(cg.g[i]);
    auto gamma = fc.contract(cg.z[i][0], cg.z[i][1], cg.z[i][0], cg.z[i][1]);
    cg.cov[i] = {dz(i, 0) / speed[i] + gamma[0], dz(i, 1) / speed[i] + gamma[1]};
    HorizontalVec nu =
        j_unit(cg.g[i], HorizontalVec{pts[i], -cg.z[i][0], -cg.z[i][1]});
    cg.H[i] = inner(cg.g[i], cg.cov[i][0], cg.cov[i][1], nu.a, nu.b);
  }
  return cg;
}

std::vector<double> raw_slopes(const GraphFunction& u, const std::vector<double>& xs,
                               const std::vector<double>& ts) {
  std::vector<double> w(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    GraphFunction::Eval e = u.eval(xs[i], ts[i]);
    w[i] = e.ux + e.u * e.ut;
  }
  return w;
}

// Grid-backed surfaces get their curvature from the discrete area gradient
// (a smooth nodal field), interpolated at the curve samples.
std::vector<double> grid_curvature(const GraphFunction& u, const MetricField& G,
                                   const std::vector<double>& xs,
                                   const std::vector<double>& ts) {
  GraphFunction Hf = GraphFunction::from_grid(discrete_mean_curvature(*u.grid(), G));
  std::vector<double> H(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) H[i] = Hf.value(xs[i], ts[i]);
  return H;
}

}  // namespace

std::vector<double> mean_curvature_along(const GraphFunction& u, const MetricField& G,
                                         const CharCurve& c, int window) {
  if (u.grid()) return grid_curvature(u, G, c.s, c.t);
  std::vector<double> W = smoothed_slopes(raw_slopes(u, c.s, c.t), window);
  return curve_geometry(G, c.lift, W, c.step, false, window).H;
}

std::vector<double> mean_curvature_sigma(const GraphFunction& u, const MetricField& G,
                                         const ArcCurve& c, int window) {
  if (u.grid()) return grid_curvature(u, G, c.x, c.t);
  std::vector<double> W = smoothed_slopes(raw_slopes(u, c.x, c.t), window);
  return curve_geometry(G, c.lift, W, c.step, true, window).H;
}

SmoothnessReport smoothness_report(const CharCurve& c, const GraphFunction& u,
                                   const MetricField& G, const ScalarField& f,
                                   int window) {
  std::vector<double> W = smoothed_slopes(raw_slopes(u, c.s, c.t), window);
  CurveGeometry cg = curve_geometry(G, c.lift, W, c.step, false, window);
  std::size_t n = c.size();

  SmoothnessReport rep;
  double h2 = c.step * c.step;
  auto second = [&](std::size_t i) {
    const ChartPoint &a = c.lift[i - 1], &m = c.lift[i], &b = c.lift[i + 1];
    return Vec3{(b.x - 2.0 * m.x + a.x) / h2, (b.y - 2.0 * m.y + a.y) / h2,
                (b.t - 2.0 * m.t + a.t) / h2};
  };
  for (std::size_t i = 1; i + 2 < n; ++i) {
    Vec3 d = second(i + 1) - second(i);
    double jump = std::max({std::fabs(d.x), std::fabs(d.y), std::fabs(d.t)});
    rep.max_second_diff_jump = std::max(rep.max_second_diff_jump, jump);
  }

  for (std::size_t i = 0; i < n; ++i) {
    double fv = f.eval(VarMap::xyt(c.lift[i].x, c.lift[i].y, c.lift[i].t));
    HorizontalVec jz =
        j_unit(cg.g[i], HorizontalVec{c.lift[i], cg.z[i][0], cg.z[i][1]});
    double ra = cg.cov[i][0] + fv * jz.a;
    double rb = cg.cov[i][1] + fv * jz.b;
    rep.max_geodesic_residual =
        std::max(rep.max_geodesic_residual,
                 std::sqrt(inner(cg.g[i], ra, rb, ra, rb)));
    rep.max_h_minus_f = std::max(rep.max_h_minus_f, std::fabs(cg.H[i] - fv));
  }
  return rep;
}

ArcCurve integrate_characteristic_arclength(const GraphFunction& u, const MetricField& G,
                                            const GraphDomain& D, double a, double b,
                                            double length, double step) {
  if (step <= 0.0 || length <= 0.0)
    throw ValidationError("arclength and step must be positive");
  if (!D.contains(a, b)) throw ValidationError("characteristic seed outside the domain");

  auto deriv = [&](double x, double t, double& dx, double& dt) {
    GraphFunction::Eval e = u.eval(x, t);
    ChartPoint p{x, e.u, t - x * e.u};
    MetricEval g = G.eval(p);
    double W = e.ux + e.u * e.ut;
    double Q = g.g22 * W * W + 2.0 * g.g12 * W + g.g11;
    if (Q <= 0.0) throw NumericalError("degenerate characteristic direction");
    double sq = std::sqrt(Q);
    dx = 1.0 / sq;
    dt = e.u / sq;
  };

  ArcCurve c;
  c.step = step;
  int n = steps_within(length, step);
  c.sigma.reserve(n + 1);
  c.x.reserve(n + 1);
  c.t.reserve(n + 1);
  c.lift.reserve(n + 1);
  double x = a, t = b;
  c.sigma.push_back(0.0);
  c.x.push_back(x);
  c.t.push_back(t);
  c.lift.push_back(lift_point(u, x, t));
  for (int k = 0; k < n; ++k) {
    double dx1, dt1, dx2, dt2, dx3, dt3, dx4, dt4;
    deriv(x, t, dx1, dt1);
    deriv(x + 0.5 * step * dx1, t + 0.5 * step * dt1, dx2, dt2);
    deriv(x + 0.5 * step * dx2, t + 0.5 * step * dt2, dx3, dt3);
    deriv(x + step * dx3, t + step * dt3, dx4, dt4);
    double xn = x + step / 6.0 * (dx1 + 2.0 * dx2 + 2.0 * dx3 + dx4);
    double tn = t + step / 6.0 * (dt1 + 2.0 * dt2 + 2.0 * dt3 + dt4);
    if (!D.contains(xn, tn)) {
      c.clipped = true;
      break;
    }
    x = xn;
    t = tn;
    c.sigma.push_back((k + 1) * step);
    c.x.push_back(x);
    c.t.push_back(t);
    c.lift.push_back(lift_point(u, x, t));
  }
  return c;
}

}  // namespace srmc
