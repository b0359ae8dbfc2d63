#include "srmc/connection.hpp"

#include <cmath>

namespace srmc {

namespace {

Mat3 invert3(const Mat3& a) {
  const auto& m = a.m;
  double c00 = m[1][1] * m[2][2] - m[1][2] * m[2][1];
  double c01 = m[1][2] * m[2][0] - m[1][0] * m[2][2];
  double c02 = m[1][0] * m[2][1] - m[1][1] * m[2][0];
  double det = m[0][0] * c00 + m[0][1] * c01 + m[0][2] * c02;
  if (det == 0.0 || !std::isfinite(det))
    throw NumericalError("coordinate metric is singular");
  Mat3 r;
  r.m[0][0] = c00 / det;
  r.m[1][0] = c01 / det;
  r.m[2][0] = c02 / det;
  r.m[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
  r.m[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
  r.m[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
  r.m[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
  r.m[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
  r.m[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
  return r;
}

double pair3(const Mat3& g, const Vec3& u, const Vec3& v) {
  double ua[3] = {u.x, u.y, u.t};
  double va[3] = {v.x, v.y, v.t};
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += g.m[i][j] * ua[i] * va[j];
  return s;
}

ChartPoint shift(const ChartPoint& p, int axis, double h) {
  ChartPoint q = p;
  if (axis == 0) q.x += h;
  if (axis == 1) q.y += h;
  if (axis == 2) q.t += h;
  return q;
}

}  // namespace

Mat3 coord_metric(const MetricField& G, const ChartPoint& p) {
  MetricEval g = G.eval(p);
  // frame-to-coordinate change A has columns X, Y, T; with
  // A^{-1} = [[1,0,0],[0,1,0],[0,x,1]] the pullback of diag(G,1) is
  //   [[g11, g12,       0 ],
  //    [g12, g22 + x^2, x ],
  //    [0,   x,         1 ]]
  // (the x^2 and x entries implement omega = dt + x dy).
  double x = p.x;
  Mat3 r;
  r.m[0][0] = g.g11;
  r.m[0][1] = r.m[1][0] = g.g12;
  r.m[1][1] = g.g22 + x * x;
  r.m[1][2] = r.m[2][1] = x;
  r.m[2][2] = 1.0;
  return r;
}

CoordChristoffels levi_civita_coord(const MetricField& G, const ChartPoint& p, double h) {
  if (h <= 0.0) throw ValidationError("finite-difference step must be positive");
  Mat3 g0 = coord_metric(G, p);
  Mat3 ginv = invert3(g0);

  double dg[3][3][3];  // dg[mu][i][j] = d_mu g_ij
  for (int mu = 0; mu < 3; ++mu) {
    Mat3 gp = coord_metric(G, shift(p, mu, h));
    Mat3 gm = coord_metric(G, shift(p, mu, -h));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) dg[mu][i][j] = (gp.m[i][j] - gm.m[i][j]) / (2.0 * h);
  }

  CoordChristoffels c;
  for (int l = 0; l < 3; ++l)
    for (int m = 0; m < 3; ++m)
      for (int n = 0; n < 3; ++n) {
        double s = 0.0;
        for (int r = 0; r < 3; ++r)
          s += ginv.m[l][r] * (dg[m][r][n] + dg[n][r][m] - dg[r][m][n]);
        c.gamma[l][m][n] = 0.5 * s;
      }
  return c;
}

Vec3 cov_deriv_T(const CoordChristoffels& c, const Vec3& w) {
  // (D_w T)^l = w^m Gamma^l_{m t}
  double wa[3] = {w.x, w.y, w.t};
  double out[3] = {0.0, 0.0, 0.0};
  for (int l = 0; l < 3; ++l)
    for (int m = 0; m < 3; ++m) out[l] += wa[m] * c.gamma[l][m][2];
  return {out[0], out[1], out[2]};
}

namespace {

// Solve G a = lambda for frame coefficients of a horizontal vector.
HorizontalVec raise_covector(const MetricEval& g, const ChartPoint& base, double lx, double ly) {
  double det = g.det();
  HorizontalVec r;
  r.base = base;
  r.a = (g.g22 * lx - g.g12 * ly) / det;
  r.b = (-g.g12 * lx + g.g11 * ly) / det;
  return r;
}

}  // namespace

HorizontalVec tau_apply(const MetricField& G, const HorizontalVec& v, double h) {
  CoordChristoffels c = levi_civita_coord(G, v.base, h);
  Mat3 gc = coord_metric(G, v.base);
  MetricEval g = G.eval(v.base);

  Vec3 vcoord = v.coords();
  Vec3 DvT = cov_deriv_T(c, vcoord);
  Vec3 DXT = cov_deriv_T(c, frame_X());
  Vec3 DYT = cov_deriv_T(c, frame_Y(v.base));

  double lx = 0.5 * (pair3(gc, DvT, frame_X()) + pair3(gc, DXT, vcoord));
  double ly = 0.5 * (pair3(gc, DvT, frame_Y(v.base)) + pair3(gc, DYT, vcoord));
  return raise_covector(g, v.base, lx, ly);
}

HorizontalVec j_from_levi_civita(const MetricField& G, const HorizontalVec& v, double h) {
  CoordChristoffels c = levi_civita_coord(G, v.base, h);
  Mat3 gc = coord_metric(G, v.base);
  MetricEval g = G.eval(v.base);

  Vec3 vcoord = v.coords();
  Vec3 DvT = cov_deriv_T(c, vcoord);
  Vec3 DXT = cov_deriv_T(c, frame_X());
  Vec3 DYT = cov_deriv_T(c, frame_Y(v.base));

  double lx = 0.5 * (pair3(gc, DvT, frame_X()) - pair3(gc, DXT, vcoord));
  double ly = 0.5 * (pair3(gc, DvT, frame_Y(v.base)) - pair3(gc, DYT, vcoord));
  return raise_covector(g, v.base, lx, ly);
}

FrameConnection nabla_frame(const MetricEval& g) {
  // 2 <nabla_i e_j, e_k> = e_i(G_jk) + e_j(G_ik) - e_k(G_ij); torsion and
  // bracket terms pair to zero against horizontal e_k.
  auto entry_index = [](int a, int b) { return (a == 0 && b == 0) ? 0 : ((a == 1 && b == 1) ? 2 : 1); };
  double det = g.det();
  FrameConnection fc;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double c[2];
      for (int k = 0; k < 2; ++k) {
        c[k] = 0.5 * (g.frame_deriv(i, entry_index(j, k)) + g.frame_deriv(j, entry_index(i, k)) -
                      g.frame_deriv(k, entry_index(i, j)));
      }
      fc.gamma[0][i][j] = (g.g22 * c[0] - g.g12 * c[1]) / det;
      fc.gamma[1][i][j] = (-g.g12 * c[0] + g.g11 * c[1]) / det;
    }
  return fc;
}

FrameConnection nabla_frame(const MetricField& G, const ChartPoint& p) {
  return nabla_frame(G.eval(p));
}

}  // namespace srmc
