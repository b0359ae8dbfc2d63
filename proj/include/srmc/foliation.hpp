#pragma once
// Characteristic curves of an intrinsic graph.  In the (x, t) parameter
// plane they solve t'(s) = u(s, t(s)); the lift Gamma(s) = Phi(s, t(s)) has
// tangent x'X + (...)Y + (t' - u x')T, so the ODE defect is exactly the
// contact form on the lifted tangent.  Curves are integrated by fixed-step
// RK4, both directions from the initial point, and clipped at the domain
// edge.  The sigma-parameterized variant trades the x parameter for unit
// speed, which lines its samples up with the geodesic integrator.

#include <vector>

#include "srmc/chart.hpp"
#include "srmc/connection.hpp"
#include "srmc/graph.hpp"

namespace srmc {

struct CharCurve {
  double a = 0.0, b = 0.0;   // initial condition t(a) = b
  double step = 1e-3;
  int ia = 0;                // index of the sample at s = a
  std::vector<double> s, t;  // samples, uniform spacing, ascending s
  std::vector<double> slope; // u(s_i, t_i), the ODE right-hand side
  std::vector<ChartPoint> lift;
  bool clipped = false;      // stopped early at the domain edge

  std::size_t size() const { return s.size(); }
};

CharCurve integrate_characteristic(const GraphFunction& u, const GraphDomain& D,
                                   double a, double b, double s0, double s1,
                                   double step);

// Max over segment midpoints of |H'(m) - u(m, H(m))| where H is the cubic
// Hermite through adjacent samples.  This is omega of the lifted tangent,
// so it doubles as the horizontality check.
double horizontality_residual(const CharCurve& c, const GraphFunction& u);

struct FoliationFamily {
  std::vector<double> eps;
  std::vector<CharCurve> curves;           // curve k starts at (a, b + eps[k])
  std::vector<std::vector<double>> dt_deps; // d t_eps / d eps at curve k samples
  double min_dt_deps = 0.0;                // infimum of the Jacobian entries
  double min_gap = 0.0;                    // min over neighbors of t_{k+1} - t_k
};

FoliationFamily foliate_family(const GraphFunction& u, const GraphDomain& D,
                               double a, double b, const std::vector<double>& eps,
                               double s0, double s1, double step);

// Curvature of the characteristic field along the curve:
//   H = <dz/dsigma + nabla-contraction, nu_h>,  z the unit field, nu_h = -j(z).
// Central differences over the samples; second-order one-sided at the ends.
// window > 1 switches dz to the least-squares line slope over that many
// samples, with the slope input pre-averaged over the same width.  For
// grid-backed u the samples come from the discrete area gradient instead
// (see discrete_mean_curvature) and window is ignored: difference quotients
// of the interpolant pick up its cell-scale sawtooth.
std::vector<double> mean_curvature_along(const GraphFunction& u, const MetricField& G,
                                         const CharCurve& c, int window = 0);

struct SmoothnessReport {
  double max_second_diff_jump = 0.0;  // lifted curve, adjacent 3-point stencils
  double max_geodesic_residual = 0.0; // ||nabla_z z + f j(z)||_g over samples
  double max_h_minus_f = 0.0;         // sup |H - f|
};

// Numerical stand-in for a regularity statement: small values are consistent
// with a C^2 curve of curvature f, large values falsify it.  No bound is
// asserted for non-critical graphs.
SmoothnessReport smoothness_report(const CharCurve& c, const GraphFunction& u,
                                   const MetricField& G,
                                   const ScalarField& f = ScalarField::constant(0.0),
                                   int window = 0);

// Same trajectory parameterized by arclength sigma of the lift:
//   dx/dsigma = 1/sqrt(Q),  dt/dsigma = u/sqrt(Q).
struct ArcCurve {
  double step = 1e-3;
  std::vector<double> sigma, x, t;
  std::vector<ChartPoint> lift;
  bool clipped = false;

  std::size_t size() const { return sigma.size(); }
};

ArcCurve integrate_characteristic_arclength(const GraphFunction& u, const MetricField& G,
                                            const GraphDomain& D, double a, double b,
                                            double length, double step);

std::vector<double> mean_curvature_sigma(const GraphFunction& u, const MetricField& G,
                                         const ArcCurve& c, int window = 0);

}  // namespace srmc
