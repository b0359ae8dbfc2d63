#pragma once
// Gradient descent on two discrete functionals, both assembled cell by cell
// with corner-averaged values and central cell differences, so that the
// assembled gradient is the exact derivative of the discrete energy.
//
// Intrinsic branch, nodes u_ij over D in the (x, t) plane:
//   E(u) = sum_cells hx ht ( sqrt(Q(cell)) - int_0^{u_c} f det G | graph )
// whose cell derivative reproduces the K/M weak form.  Planes in the
// heisenberg preset are exact critical points of the discrete energy.
//
// t-graph branch, nodes v_ij over Omega in the (x, y) plane, F = (-y, x):
//   E(v) = sum_cells hx hy ( sqrt(|Dv + F|^2 + eps^2) + f v )
// minimized under an eps-continuation schedule.  energy_tgraph is the
// plain nodal (trapezoid weighted, one-sided differences) form kept for
// closed-form value checks.
//
// Descent: Barzilai-Borwein step with Armijo backtracking; boundary nodes
// are frozen; accepted energies never increase.

#include <utility>
#include <vector>

#include "srmc/chart.hpp"
#include "srmc/expr.hpp"
#include "srmc/graph.hpp"
#include "srmc/gridio.hpp"
#include "srmc/quadrature.hpp"

namespace srmc {

struct DescentOptions {
  int max_steps = 20000;
  double grad_tol = 1e-8;  // sup norm of the interior gradient; the nodal
                           // gradient carries a cell-area factor, so this is
                           // far tighter than any pointwise tolerance here
  double armijo = 1e-4;
  int max_backtracks = 60;
  double step0 = 1.0;
};

struct SolveReport {
  std::vector<double> energy;             // accepted values, per-stage monotone
  std::vector<std::size_t> stage_start;   // offsets of the eps stages
  std::vector<double> eps_schedule;
  int iterations = 0;
  bool converged = false;
  double grad_inf = 0.0;
  double el_residual = 0.0;  // see euler_lagrange_residual / tgraph report
};

double energy_intrinsic(const GridField& u, const MetricField& G, const ScalarField& f);
GridField gradient_intrinsic(const GridField& u, const MetricField& G, const ScalarField& f);

// Mean curvature read off the discrete area gradient: the gradient at an
// interior node is the weak form paired with that node's hat function, whose
// mass is hx*ht, so grad/(hx*ht*sqrt(det G)) estimates H there to second
// order.  This sidesteps differencing the interpolant along curves, whose
// cell-scale sawtooth swamps difference quotients.  Edge nodes copy their
// nearest interior value.
GridField discrete_mean_curvature(const GridField& u, const MetricField& G);

std::pair<GridField, SolveReport> minimize_intrinsic(const GridField& u0,
                                                     const MetricField& G,
                                                     const ScalarField& f,
                                                     const DescentOptions& opt = {});

// sup over a 3x3 array of interior bumps of |first_variation(u, bump)| divided
// by the W^{1,1} norm of the bump; midpoint quadrature at 4x grid resolution.
double euler_lagrange_residual(const GraphFunction& u, const MetricField& G,
                               const ScalarField& f, const GraphDomain& D,
                               int cells_x, int cells_t);

// Nodal t-graph energy: trapezoid weights, forward differences (backward on
// the trailing edge).  f is a field of (x, y); the grid's t axis stores y.
double energy_tgraph(const GridField& v, const ScalarField& f, double eps);

double energy_tgraph_cells(const GridField& v, const ScalarField& f, double eps);
GridField gradient_tgraph_cells(const GridField& v, const ScalarField& f, double eps);

std::pair<GridField, SolveReport> minimize_tgraph(const GridField& v0,
                                                  const ScalarField& f,
                                                  const std::vector<double>& eps_schedule,
                                                  const DescentOptions& opt = {});

// Node sampling and Dirichlet helpers shared by tests and the cli.
GridField sample_grid(const GraphFunction& g, const GraphDomain& D, int nx, int nt);
void impose_boundary(GridField& u, const GraphFunction& b);

}  // namespace srmc
