#pragma once
// Two connections live here.
//
// 1. The Levi-Civita connection D of the ambient Riemannian metric, in chart
//    coordinates, with Christoffel symbols obtained by central differencing
//    the assembled coordinate metric.  It is used to split v -> D_v T into
//    its skew part J and symmetric part tau.
//
// 2. The horizontal metric connection "nabla": the unique metric connection
//    whose torsion is  tor(U,V) = <U,T> tau(V) - <V,T> tau(U) + 2 <J(U),V> T.
//    It parallelizes T, and for horizontal frame legs the Koszul formula
//    collapses to frame derivatives of the metric entries:
//      2 <nabla_i e_j, e_k> = e_i(G_jk) + e_j(G_ik) - e_k(G_ij).

#include <array>

#include "srmc/chart.hpp"

namespace srmc {

struct Mat3 {
  double m[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
};

// Ambient coordinate metric at p: the frame metric diag(G, 1) pushed through
// the frame-to-coordinate change.
Mat3 coord_metric(const MetricField& G, const ChartPoint& p);

// gamma[l][m][n] = Gamma^l_{mn} of the ambient metric, central differences
// with step h on the coordinate metric.
struct CoordChristoffels {
  double gamma[3][3][3] = {};
};
CoordChristoffels levi_civita_coord(const MetricField& G, const ChartPoint& p, double h = 1e-5);

// D_w T in coordinates (T has constant components, so only Gamma acts).
Vec3 cov_deriv_T(const CoordChristoffels& c, const Vec3& w);

// Symmetric part of v -> D_v T, returned as a horizontal vector:
//   2 <tau(v), w> = <D_v T, w> + <D_w T, v>  for horizontal w.
HorizontalVec tau_apply(const MetricField& G, const HorizontalVec& v, double h = 1e-5);

// Skew part, from the same Levi-Civita data; equals j_apply up to the
// finite-difference error (kept separate so the two routes can be compared).
HorizontalVec j_from_levi_civita(const MetricField& G, const HorizontalVec& v, double h = 1e-5);

// Horizontal connection coefficients: nabla_{e_i} e_j = sum_k gamma[k][i][j] e_k,
// indices 0 = X, 1 = Y.  Horizontal fields stay horizontal under nabla.
struct FrameConnection {
  double gamma[2][2][2] = {};

  // nabla_{dir} (field) for constant frame coefficients:
  // dir = (da, db), field = (fa, fb) plus its directional derivative terms
  // handled by the caller.
  std::array<double, 2> contract(double da, double db, double fa, double fb) const {
    std::array<double, 2> out{};
    for (int k = 0; k < 2; ++k) {
      out[k] = da * (fa * gamma[k][0][0] + fb * gamma[k][0][1]) +
               db * (fa * gamma[k][1][0] + fb * gamma[k][1][1]);
    }
    return out;
  }
};
FrameConnection nabla_frame(const MetricField& G, const ChartPoint& p);
FrameConnection nabla_frame(const MetricEval& g);

}  // namespace srmc
