#pragma once
// Area functional of intrinsic graphs and its first variation.
//
// With W = u_x + u u_t and metric entries evaluated at Phi(x,t), the area
// integrand is sqrt(Q), Q = g22 W^2 + 2 g12 W + g11.  Perturbing u by v
// moves the graph point along Y, so the integrand feels the metric only
// through the frame derivative Y(g) = d_y g - x d_t g:
//
//   K1 = (Y(g22) W^2 + 2 Y(g12) W + Y(g11)) / (2 sqrt Q)
//   M  = (g22 W + g12) / sqrt Q
//   K  = K1 - f det G
//
//   d/de [area - bulk](u + e v) = int_D  K v + M (v_x + u v_t + v u_t)
//
// where bulk is the prescribed-curvature pairing whose u-derivative is
// int_D f det(G) v (f, det G at the graph point).  Criticality is tied to
// the curvature of the characteristic field by
//
//   H sqrt(det G) = K1 - dM/ds,     d/ds = d_x + u d_t.

#include "srmc/chart.hpp"
#include "srmc/expr.hpp"
#include "srmc/graph.hpp"
#include "srmc/quadrature.hpp"

namespace srmc {

struct Coefficients {
  double K1 = 0.0, M = 0.0, K = 0.0;
  double sqrtQ = 1.0, detG = 1.0, W = 0.0;
};

Coefficients coefficients(const GraphFunction& u, double x, double t,
                          const MetricField& G, const ScalarField& f);

double area(const GraphFunction& u, const MetricField& G, const GraphDomain& D,
            const Quadrature& quad);

// d/de of the bulk pairing: int_D f(Phi) det G(Phi) v dx dt.
double volume_derivative(const ScalarField& f, const MetricField& G,
                         const GraphFunction& u, const GraphFunction& v,
                         const GraphDomain& D, const Quadrature& quad);

// Quadrature of K v + M (v_x + u v_t + v u_t).  v must vanish on the edge of
// D: edge samples above 1e-9 in absolute value raise ValidationError.
double first_variation(const GraphFunction& u, const GraphFunction& v,
                       const ScalarField& f, const MetricField& G,
                       const GraphDomain& D, const Quadrature& quad);

// Independent ground truth: symmetric difference of the area through u +- h v
// minus volume_derivative.  Shares nothing with the K/M integrand.
double fd_variation_oracle(const GraphFunction& u, const GraphFunction& v,
                           const ScalarField& f, const MetricField& G,
                           const GraphDomain& D, const Quadrature& quad,
                           double h = 1e-4);

struct VariationReport {
  double formula = 0.0, oracle = 0.0;
  double abs_gap = 0.0, rel_gap = 0.0;  // rel_gap against |oracle|, 0 if both 0
};
VariationReport variation_report(const GraphFunction& u, const GraphFunction& v,
                                 const ScalarField& f, const MetricField& G,
                                 const GraphDomain& D, const Quadrature& quad,
                                 double h = 1e-4);

// u + c v as a new GraphFunction.  Expression operands combine into one
// tree; a grid operand forces sampling onto its grid (shapes must agree
// when both are grids).
GraphFunction axpy(const GraphFunction& u, double c, const GraphFunction& v);

// Pointwise curvature of the characteristic field through (x, t):
//   H = (K1 - dM/ds) / sqrt(det G),
// dM/ds by central differences along the direction (1, u(x,t)).
double mean_curvature_at(const GraphFunction& u, double x, double t,
                         const MetricField& G, const ScalarField& f,
                         double step = 1e-4);

// First variation assembled from surface data instead of the K/M integrand:
// -(H - f) |N_h| <phi Y, nu_h> against the Riemannian area measure.  The
// leading sign is calibrated so that it matches first_variation (the graph
// moves along +Y while <Y, nu_h> < 0).  Cross-check only; needs smooth u.
double geometric_first_variation(const GraphFunction& u, const GraphFunction& phi,
                                 const ScalarField& f, const MetricField& G,
                                 const GraphDomain& D, const Quadrature& quad,
                                 double step = 1e-4);

}  // namespace srmc
