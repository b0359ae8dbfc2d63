#include "srmc/quadrature.hpp"

#include <cmath>
#include <cstdlib>
#include <thread>

namespace srmc {

void gauss_legendre_reference(int order, std::vector<double>& nodes,
                              std::vector<double>& weights) {
  if (order < 1 || order > 16) throw ValidationError("Gauss order must be in [1, 16]");
  nodes.assign(order, 0.0);
  weights.assign(order, 0.0);
  const int n = order;
  for (int k = 0; k < n; ++k) {
    // Chebyshev-based starting guess, then Newton on P_n.
    double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      if (n == 1) { p1 = x; }
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      double pn = (n == 1) ? x : p1;
      double pn1 = (n == 1) ? 1.0 : p0;  // P_{n-1}
      double dp = n * (x * pn - pn1) / (x * x - 1.0);
      double dx = pn / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= n; ++j) {
      double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    double pn1 = (n == 1) ? 1.0 : p0;
    double dp = n * (x * ((n == 1) ? x : p1) - pn1) / (x * x - 1.0);
    nodes[n - 1 - k] = x;  // ascending
    weights[n - 1 - k] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

Axis build_axis(const Quadrature& q, double a, double b, int panels) {
  if (panels < 1) throw ValidationError("quadrature needs at least one panel");
  if (!(b > a)) throw ValidationError("quadrature interval must be increasing");
  Axis ax;
  double h = (b - a) / panels;
  if (q.rule == Quadrature::Rule::Midpoint) {
    ax.node.reserve(panels);
    ax.weight.reserve(panels);
    for (int i = 0; i < panels; ++i) {
      ax.node.push_back(a + (i + 0.5) * h);
      ax.weight.push_back(h);
    }
    return ax;
  }
  std::vector<double> rn, rw;
  gauss_legendre_reference(q.order, rn, rw);
  ax.node.reserve(static_cast<std::size_t>(panels) * q.order);
  ax.weight.reserve(static_cast<std::size_t>(panels) * q.order);
  for (int i = 0; i < panels; ++i) {
    double c = a + (i + 0.5) * h;
    for (int k = 0; k < q.order; ++k) {
      ax.node.push_back(c + 0.5 * h * rn[k]);
      ax.weight.push_back(0.5 * h * rw[k]);
    }
  }
  return ax;
}

int quad_threads() {
  const char* env = std::getenv("SRMC_THREADS");
  if (!env) return 1;
  int n = std::atoi(env);
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (n < 1) n = 1;
  if (n > hw) n = hw;
  return n;
}

double integrate(const Quadrature& q, const GraphDomain& d,
                 const std::function<double(double, double)>& f) {
  Axis ax = build_axis(q, d.x0, d.x1, q.m);
  Axis at = build_axis(q, d.t0, d.t1, q.n);
  const std::size_t nx = ax.node.size();
  const std::size_t nt = at.node.size();

  std::vector<double> row_sum(nx, 0.0);
  auto run_rows = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      double s = 0.0;  // per-row accumulation is always sequential in j
      for (std::size_t j = 0; j < nt; ++j)
        s += at.weight[j] * f(ax.node[i], at.node[j]);
      row_sum[i] = ax.weight[i] * s;
    }
  };

  int threads = quad_threads();
  if (threads <= 1 || nx < 8) {
    run_rows(0, nx);
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (nx + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      std::size_t lo = t * chunk;
      std::size_t hi = std::min(nx, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(run_rows, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  // fixed-order reduction keeps the result independent of the thread count
  double total = 0.0;
  for (std::size_t i = 0; i < nx; ++i) total += row_sum[i];
  return total;
}

}  // namespace srmc
