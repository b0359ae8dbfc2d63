#include "srmc/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

#include "srmc/variation.hpp"

namespace srmc {

namespace {

void eta_rule(std::vector<double>& nodes, std::vector<double>& weights) {
  static std::vector<double> n, w;
  if (n.empty()) gauss_legendre_reference(4, n, w);
  nodes = n;
  weights = w;
}

// signed integral of f * det G along the fiber (x, eta, t - x eta), eta in [0, uc]
double fiber_integral(const ScalarField& f, const MetricField& G, double x, double t,
                      double uc) {
  if (uc == 0.0) return 0.0;
  if (f.is_constant() && G.is_constant()) {
    double fv = f.eval(VarMap::xyt(x, 0.0, t));
    if (fv == 0.0) return 0.0;
    return fv * G.eval(ChartPoint{x, 0.0, t}).det() * uc;
  }
  std::vector<double> nodes, weights;
  eta_rule(nodes, weights);
  double acc = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    double eta = 0.5 * uc * (nodes[k] + 1.0);
    ChartPoint p{x, eta, t - x * eta};
    acc += weights[k] * f.eval(VarMap::xyt(p.x, p.y, p.t)) * G.eval(p).det();
  }
  return 0.5 * uc * acc;
}

struct IntrinsicCell {
  double sq = 1.0, M = 0.0, K1 = 0.0, fdet = 0.0;
  double uc = 0.0, ut = 0.0;
};

IntrinsicCell intrinsic_cell(const GridField& u, const MetricField& G,
                             const ScalarField& f, int i, int j, bool with_grad) {
  double hx = u.hx(), ht = u.ht();
  double u00 = u.at(i, j), u10 = u.at(i + 1, j);
  double u01 = u.at(i, j + 1), u11 = u.at(i + 1, j + 1);
  IntrinsicCell c;
  c.uc = 0.25 * (u00 + u10 + u01 + u11);
  double ux = (u10 + u11 - u00 - u01) / (2.0 * hx);
  c.ut = (u01 + u11 - u00 - u10) / (2.0 * ht);
  double xc = u.xcoord(i) + 0.5 * hx;
  double tc = u.tcoord(j) + 0.5 * ht;
  double W = ux + c.uc * c.ut;
  ChartPoint p{xc, c.uc, tc - xc * c.uc};
  MetricEval g = G.eval(p);
  double Q = g.g22 * W * W + 2.0 * g.g12 * W + g.g11;
  if (Q <= 0.0) throw NumericalError("area radicand not positive");
  c.sq = std::sqrt(Q);
  if (with_grad) {
    c.M = (g.g22 * W + g.g12) / c.sq;
    c.K1 = (g.Yg22 * W * W + 2.0 * g.Yg12 * W + g.Yg11) / (2.0 * c.sq);
    c.fdet = f.eval(VarMap::xyt(p.x, p.y, p.t)) * g.det();
  }
  return c;
}

}  // namespace

double energy_intrinsic(const GridField& u, const MetricField& G, const ScalarField& f) {
  if (u.nx < 2 || u.nt < 2) throw ValidationError("grid needs at least 2x2 nodes");
  double hx = u.hx(), ht = u.ht();
  double acc = 0.0;
  for (int i = 0; i + 1 < u.nx; ++i) {
    for (int j = 0; j + 1 < u.nt; ++j) {
      IntrinsicCell c = intrinsic_cell(u, G, f, i, j, false);
      double xc = u.xcoord(i) + 0.5 * hx;
      double tc = u.tcoord(j) + 0.5 * ht;
      acc += (c.sq - fiber_integral(f, G, xc, tc, c.uc)) * hx * ht;
    }
  }
  return acc;
}

GridField gradient_intrinsic(const GridField& u, const MetricField& G,
                             const ScalarField& f) {
  GridField grad = GridField::make(u.nx, u.nt, u.x0, u.x1, u.t0, u.t1, 0.0);
  double hx = u.hx(), ht = u.ht();
  double scale = hx * ht;
  for (int i = 0; i + 1 < u.nx; ++i) {
    for (int j = 0; j + 1 < u.nt; ++j) {
      IntrinsicCell c = intrinsic_cell(u, G, f, i, j, true);
      // corner order 00 10 01 11; signs of the cell differences
      const int di[4] = {0, 1, 0, 1}, dj[4] = {0, 0, 1, 1};
      const double sx[4] = {-1.0, 1.0, -1.0, 1.0};
      const double st[4] = {-1.0, -1.0, 1.0, 1.0};
      for (int k = 0; k < 4; ++k) {
        double dW = sx[k] / (2.0 * hx) + 0.25 * c.ut + c.uc * st[k] / (2.0 * ht);
        double g = scale * (c.M * dW + (c.K1 - c.fdet) * 0.25);
        grad.at(i + di[k], j + dj[k]) += g;
      }
    }
  }
  for (int i = 0; i < u.nx; ++i)
    for (int j = 0; j < u.nt; ++j)
      if (!u.interior(i, j)) grad.at(i, j) = 0.0;
  return grad;
}

GridField discrete_mean_curvature(const GridField& u, const MetricField& G) {
  if (u.nx < 3 || u.nt < 3) throw ValidationError("grid needs at least 3x3 nodes");
  GridField H = gradient_intrinsic(u, G, ScalarField::constant(0.0));
  double mass = u.hx() * u.ht();
  for (int i = 1; i + 1 < u.nx; ++i) {
    for (int j = 1; j + 1 < u.nt; ++j) {
      double x = u.xcoord(i), t = u.tcoord(j), uv = u.at(i, j);
      MetricEval g = G.eval(ChartPoint{x, uv, t - x * uv});
      H.at(i, j) /= mass * std::sqrt(g.det());
    }
  }
  for (int i = 0; i < u.nx; ++i) {
    int ic = std::clamp(i, 1, u.nx - 2);
    for (int j = 0; j < u.nt; ++j) {
      int jc = std::clamp(j, 1, u.nt - 2);
      if (ic != i || jc != j) H.at(i, j) = H.at(ic, jc);
    }
  }
  return H;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double inf_norm(const std::vector<double>& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::fabs(x));
  return m;
}

// Barzilai-Borwein descent with Armijo backtracking on the full grid vector;
// the gradient callback must vanish on frozen nodes.
void run_descent(const std::function<double(const GridField&)>& energy,
                 const std::function<GridField(const GridField&)>& gradient,
                 GridField& u, const DescentOptions& opt, SolveReport& rep) {
  rep.stage_start.push_back(rep.energy.size());
  double E = energy(u);
  rep.energy.push_back(E);
  GridField g = gradient(u);
  std::vector<double> s_prev, y_prev;
  double gamma = opt.step0;

  int flat = 0;  // consecutive iterations with only ulp-level decrease
  for (int it = 0; it < opt.max_steps; ++it) {
    rep.grad_inf = inf_norm(g.v);
    if (rep.grad_inf <= opt.grad_tol) {
      rep.converged = true;
      return;
    }
    if (!s_prev.empty()) {
      double sy = dot(s_prev, y_prev);
      double yy = dot(y_prev, y_prev);
      gamma = (sy > 0.0 && yy > 0.0) ? sy / yy : opt.step0;
    }
    double gg = dot(g.v, g.v);
    GridField trial = u;
    double Et = 0.0;
    int bt = 0;
    for (; bt <= opt.max_backtracks; ++bt) {
      for (std::size_t k = 0; k < u.v.size(); ++k) trial.v[k] = u.v[k] - gamma * g.v[k];
      Et = energy(trial);
      if (Et <= E - opt.armijo * gamma * gg) break;
      gamma *= 0.5;
    }
    if (bt > opt.max_backtracks) {
      // No representable decrease along -g: the iterate is the discrete
      // minimum to working precision even if grad_tol was not reached.
      rep.converged = true;
      return;
    }
    flat = (E - Et <= 1e-14 * std::max(1.0, std::fabs(E))) ? flat + 1 : 0;
    GridField gn = gradient(trial);
    s_prev.resize(u.v.size());
    y_prev.resize(u.v.size());
    for (std::size_t k = 0; k < u.v.size(); ++k) {
      s_prev[k] = trial.v[k] - u.v[k];
      y_prev[k] = gn.v[k] - g.v[k];
    }
    u = std::move(trial);
    g = std::move(gn);
    E = Et;
    rep.energy.push_back(E);
    rep.iterations += 1;
    if (flat >= 30) {
      rep.converged = true;  // energy flatlined for 30 iterations
      rep.grad_inf = inf_norm(g.v);
      return;
    }
  }
  rep.converged = inf_norm(g.v) <= opt.grad_tol;
  rep.grad_inf = inf_norm(g.v);
}

std::string bump_source(double cx, double ct, double rx, double rt, double sigma) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "exp(-%.17g*(((x-%.17g)/%.17g)^2+((t-%.17g)/%.17g)^2))", sigma, cx,
                rx, ct, rt);
  return buf;
}

}  // namespace

double euler_lagrange_residual(const GraphFunction& u, const MetricField& G,
                               const ScalarField& f, const GraphDomain& D,
                               int cells_x, int cells_t) {
  Quadrature mid = Quadrature::midpoint(4 * cells_x, 4 * cells_t);
  Quadrature smooth = Quadrature::gauss(4, 48, 48);
  double rx = 0.5 * D.width(), rt = 0.5 * D.height();
  double worst = 0.0;
  for (int bi = 0; bi < 3; ++bi) {
    for (int bj = 0; bj < 3; ++bj) {
      double cx = D.x0 + (0.3 + 0.2 * bi) * D.width();
      double ct = D.t0 + (0.3 + 0.2 * bj) * D.height();
      GraphFunction v =
          GraphFunction::from_expression(bump_source(cx, ct, rx, rt, 90.0));
      double fv = first_variation(u, v, f, G, D, mid);
      double w11 = integrate(smooth, D, [&](double x, double t) {
        GraphFunction::Eval e = v.eval(x, t);
        return std::fabs(e.u) + std::fabs(e.ux) + std::fabs(e.ut);
      });
      worst = std::max(worst, std::fabs(fv) / w11);
    }
  }
  return worst;
}

std::pair<GridField, SolveReport> minimize_intrinsic(const GridField& u0,
                                                     const MetricField& G,
                                                     const ScalarField& f,
                                                     const DescentOptions& opt) {
  GridField u = u0;
  SolveReport rep;
  run_descent([&](const GridField& w) { return energy_intrinsic(w, G, f); },
              [&](const GridField& w) { return gradient_intrinsic(w, G, f); }, u, opt,
              rep);
  GraphDomain D{u.x0, u.x1, u.t0, u.t1};
  rep.el_residual = euler_lagrange_residual(GraphFunction::from_grid(u), G, f, D,
                                            u.nx - 1, u.nt - 1);
  return {std::move(u), std::move(rep)};
}

double energy_tgraph(const GridField& v, const ScalarField& f, double eps) {
  if (v.nx < 2 || v.nt < 2) throw ValidationError("grid needs at least 2x2 nodes");
  if (eps < 0.0) throw ValidationError("smoothing parameter must be nonnegative");
  double hx = v.hx(), hy = v.ht();
  double acc = 0.0;
  for (int i = 0; i < v.nx; ++i) {
    for (int j = 0; j < v.nt; ++j) {
      int i1 = i + 1 < v.nx ? i : i - 1;  // backward on the trailing edge
      int j1 = j + 1 < v.nt ? j : j - 1;
      double dvx = (v.at(i1 + 1, j) - v.at(i1, j)) / hx;
      double dvy = (v.at(i, j1 + 1) - v.at(i, j1)) / hy;
      double px = dvx - v.tcoord(j);
      double py = dvy + v.xcoord(i);
      double w = ((i == 0 || i == v.nx - 1) ? 0.5 : 1.0) *
                 ((j == 0 || j == v.nt - 1) ? 0.5 : 1.0);
      double x = v.xcoord(i), y = v.tcoord(j);
      acc += w * hx * hy *
             (std::sqrt(px * px + py * py + eps * eps) +
              f.eval(VarMap::xyt(x, y, 0.0)) * v.at(i, j));
    }
  }
  return acc;
}

namespace {

struct TgraphCell {
  double N = 0.0, px = 0.0, py = 0.0, fc = 0.0;
};

TgraphCell tgraph_cell(const GridField& v, const ScalarField& f, double eps, int i,
                       int j) {
  double hx = v.hx(), hy = v.ht();
  double v00 = v.at(i, j), v10 = v.at(i + 1, j);
  double v01 = v.at(i, j + 1), v11 = v.at(i + 1, j + 1);
  double dvx = (v10 + v11 - v00 - v01) / (2.0 * hx);
  double dvy = (v01 + v11 - v00 - v10) / (2.0 * hy);
  double xc = v.xcoord(i) + 0.5 * hx;
  double yc = v.tcoord(j) + 0.5 * hy;
  TgraphCell c;
  c.px = dvx - yc;
  c.py = dvy + xc;
  c.N = std::sqrt(c.px * c.px + c.py * c.py + eps * eps);
  c.fc = f.eval(VarMap::xyt(xc, yc, 0.0));
  return c;
}

}  // namespace

double energy_tgraph_cells(const GridField& v, const ScalarField& f, double eps) {
  if (v.nx < 2 || v.nt < 2) throw ValidationError("grid needs at least 2x2 nodes");
  double hx = v.hx(), hy = v.ht();
  double acc = 0.0;
  for (int i = 0; i + 1 < v.nx; ++i) {
    for (int j = 0; j + 1 < v.nt; ++j) {
      TgraphCell c = tgraph_cell(v, f, eps, i, j);
      double vc = 0.25 * (v.at(i, j) + v.at(i + 1, j) + v.at(i, j + 1) +
                          v.at(i + 1, j + 1));
      acc += hx * hy * (c.N + c.fc * vc);
    }
  }
  return acc;
}

GridField gradient_tgraph_cells(const GridField& v, const ScalarField& f, double eps) {
  GridField grad = GridField::make(v.nx, v.nt, v.x0, v.x1, v.t0, v.t1, 0.0);
  double hx = v.hx(), hy = v.ht();
  double scale = hx * hy;
  for (int i = 0; i + 1 < v.nx; ++i) {
    for (int j = 0; j + 1 < v.nt; ++j) {
      TgraphCell c = tgraph_cell(v, f, eps, i, j);
      const int di[4] = {0, 1, 0, 1}, dj[4] = {0, 0, 1, 1};
      const double sx[4] = {-1.0, 1.0, -1.0, 1.0};
      const double sy[4] = {-1.0, -1.0, 1.0, 1.0};
      for (int k = 0; k < 4; ++k) {
        double dN = (c.px * sx[k] / (2.0 * hx) + c.py * sy[k] / (2.0 * hy)) / c.N;
        grad.at(i + di[k], j + dj[k]) += scale * (dN + 0.25 * c.fc);
      }
    }
  }
  for (int i = 0; i < v.nx; ++i)
    for (int j = 0; j < v.nt; ++j)
      if (!v.interior(i, j)) grad.at(i, j) = 0.0;
  return grad;
}

std::pair<GridField, SolveReport> minimize_tgraph(const GridField& v0,
                                                  const ScalarField& f,
                                                  const std::vector<double>& eps_schedule,
                                                  const DescentOptions& opt) {
  if (eps_schedule.empty()) throw ValidationError("empty smoothing schedule");
  for (std::size_t k = 0; k < eps_schedule.size(); ++k) {
    if (eps_schedule[k] <= 0.0)
      throw ValidationError("smoothing schedule must stay positive");
    if (k > 0 && eps_schedule[k] >= eps_schedule[k - 1])
      throw ValidationError("smoothing schedule must decrease");
  }
  GridField v = v0;
  SolveReport rep;
  rep.eps_schedule = eps_schedule;
  for (double eps : eps_schedule) {
    run_descent(
        [&, eps](const GridField& w) { return energy_tgraph_cells(w, f, eps); },
        [&, eps](const GridField& w) { return gradient_tgraph_cells(w, f, eps); }, v,
        opt, rep);
  }
  // residual of the eps_min equation per unit cell measure
  rep.el_residual = rep.grad_inf / (v.hx() * v.ht());
  return {std::move(v), std::move(rep)};
}

GridField sample_grid(const GraphFunction& g, const GraphDomain& D, int nx, int nt) {
  if (nx < 2 || nt < 2) throw ValidationError("grid needs at least 2x2 nodes");
  GridField out = GridField::make(nx, nt, D.x0, D.x1, D.t0, D.t1, 0.0);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < nt; ++j)
      out.at(i, j) = g.value(out.xcoord(i), out.tcoord(j));
  return out;
}

void impose_boundary(GridField& u, const GraphFunction& b) {
  for (int i = 0; i < u.nx; ++i)
    for (int j = 0; j < u.nt; ++j)
      if (!u.interior(i, j)) u.at(i, j) = b.value(u.xcoord(i), u.tcoord(j));
}

}  // namespace srmc
