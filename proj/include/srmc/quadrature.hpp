#pragma once
// Tensor-product quadrature over a parameter rectangle: composite midpoint
// (robust for Lipschitz integrands) and composite Gauss-Legendre (fast for
// smooth ones).  Panel sums are accumulated in a fixed order; when several
// worker threads are used the per-row partial sums are still reduced in row
// order, so results are bit-identical for any thread count.

#include <functional>
#include <vector>

#include "srmc/error.hpp"
#include "srmc/graph.hpp"

namespace srmc {

struct Quadrature {
  enum class Rule { Midpoint, GaussLegendre };
  Rule rule = Rule::GaussLegendre;
  int order = 4;      // nodes per panel per axis (Gauss only)
  int m = 64, n = 64; // panels per axis

  static Quadrature gauss(int order = 4, int m = 64, int n = 64) {
    return Quadrature{Rule::GaussLegendre, order, m, n};
  }
  static Quadrature midpoint(int m = 64, int n = 64) {
    return Quadrature{Rule::Midpoint, 1, m, n};
  }
};

// Nodes and weights on [-1, 1], computed by Newton iteration on the
// Legendre recurrence.
void gauss_legendre_reference(int order, std::vector<double>& nodes, std::vector<double>& weights);

struct Axis {
  std::vector<double> node, weight;  // flattened panels
};
Axis build_axis(const Quadrature& q, double a, double b, int panels);

// integrate f over D; f is evaluated at every tensor node.
double integrate(const Quadrature& q, const GraphDomain& d,
                 const std::function<double(double, double)>& f);

// Thread cap: SRMC_THREADS, clamped to [1, hardware]; defaults to 1.
int quad_threads();

}  // namespace srmc
