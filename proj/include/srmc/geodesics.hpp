#pragma once
// Horizontal curves of prescribed curvature:  nabla_g' g' + h j(g') = 0,
// imposed with the unit rotation j.  The state is (x, y, t, theta) with
// g' = cos(theta) e1 + sin(theta) e2 in the orthonormalized frame, so unit
// speed and horizontality hold by construction and the equation reduces to
//   theta' = -kappa - h,   kappa = <nabla_{g'} e1, e2>.
// In the heisenberg preset kappa = 0 and h = 1 draws the unit circle in the
// xy-projection.

#include <functional>
#include <vector>

#include "srmc/chart.hpp"
#include "srmc/connection.hpp"
#include "srmc/foliation.hpp"

namespace srmc {

struct HorizontalCurve {
  double step = 1e-3;
  std::vector<double> s;      // arclength
  std::vector<ChartPoint> p;
  std::vector<double> theta;
  std::vector<double> h;      // curvature values used at the samples

  std::size_t size() const { return s.size(); }
};

using CurvatureFn = std::function<double(double)>;

HorizontalCurve integrate_geodesic(const MetricField& G, const ChartPoint& start,
                                   double theta0, const CurvatureFn& h,
                                   double length, double step);
HorizontalCurve integrate_geodesic(const MetricField& G, const ChartPoint& start,
                                   double theta0, const ScalarField& h_of_s,
                                   double length, double step);

// ||nabla_g' g' + h j(g')||_g per sample, rebuilt from positions and angles
// only (frame-coefficient differencing plus the connection contraction), so
// it does not reuse the integrator's theta' formula.
std::vector<double> geodesic_residual(const HorizontalCurve& c, const MetricField& G);

// Samples of g'(h) - <tau(g'), g'>; all zero along sub-Riemannian geodesics.
std::vector<double> subriemannian_check(const HorizontalCurve& c, const MetricField& G);

// Integrates the characteristic through (a, b) by arclength, reads off its
// curvature H(sigma) and initial direction, integrates the geodesic of
// curvature H from the same data and reports the sup chart distance.
struct CompareReport {
  ArcCurve characteristic;
  HorizontalCurve geodesic;
  std::vector<double> H;        // along the characteristic
  double sup_distance = 0.0;    // Euclidean chart distance, aligned samples
  double sup_h_minus_f = 0.0;   // criticality diagnostic
};

CompareReport compare_with_characteristic(const GraphFunction& u, const MetricField& G,
                                          const ScalarField& f, const GraphDomain& D,
                                          double a, double b, double length, double step,
                                          int window = 0);

}  // namespace srmc
