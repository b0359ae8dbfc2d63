#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "srmc/connection.hpp"

using namespace srmc;

namespace {

double urand(std::mt19937_64& g) { return std::ldexp(double(g() >> 11), -53); }
double in(std::mt19937_64& g, double lo, double hi) { return lo + (hi - lo) * urand(g); }
ChartPoint rpoint(std::mt19937_64& g) { return {in(g, -1, 1), in(g, -1, 1), in(g, -1, 1)}; }

// Hand-computed Christoffels of diag(g11, 1) pushed to coordinates, i.e. of
//   [[g11, 0, 0], [0, 1 + x^2, x], [0, x, 1]].
// For g11 = 1 the nonzero ones are
//   G^x_yy = -x   G^x_yt = -1/2   G^y_xy = x/2
//   G^y_xt = 1/2  G^t_xy = (1 - x^2)/2  G^t_xt = -x/2
// and a y- or t-dependent g11 adds the entries asserted inline below.
void expect_heisenberg_block(const CoordChristoffels& c, double x, double tol) {
  CHECK(std::fabs(c.gamma[1][0][1] - x / 2) <= tol);
  CHECK(std::fabs(c.gamma[1][0][2] - 0.5) <= tol);
  CHECK(std::fabs(c.gamma[2][0][1] - (1 - x * x) / 2) <= tol);
  CHECK(std::fabs(c.gamma[2][0][2] + x / 2) <= tol);
  // lower-index symmetry
  CHECK(c.gamma[1][0][1] == doctest::Approx(c.gamma[1][1][0]).epsilon(1e-12));
  CHECK(c.gamma[2][0][2] == doctest::Approx(c.gamma[2][2][0]).epsilon(1e-12));
}

}  // namespace

TEST_CASE("coordinate christoffels, flat horizontal metric") {
  MetricField H = MetricField::heisenberg();
  std::mt19937_64 g(21);
  // all coordinate entries are polynomials of degree <= 2, so the central
  // differences are exact up to roundoff
  for (int k = 0; k < 25; ++k) {
    ChartPoint p = rpoint(g);
    CoordChristoffels c = levi_civita_coord(H, p);
    double tol = 1e-10;
    CHECK(std::fabs(c.gamma[0][1][1] + p.x) <= tol);
    CHECK(std::fabs(c.gamma[0][1][2] + 0.5) <= tol);
    expect_heisenberg_block(c, p.x, tol);
    CHECK(std::fabs(c.gamma[0][0][0]) <= tol);
    CHECK(std::fabs(c.gamma[1][1][1]) <= tol);
    CHECK(std::fabs(c.gamma[2][2][2]) <= tol);
  }
}

TEST_CASE("coordinate christoffels, exponential metrics") {
  MetricField E2Y = MetricField::from_expressions("exp(2*y)", "0", "1");
  MetricField E2T = MetricField::from_expressions("exp(2*t)", "0", "1");
  std::mt19937_64 g(22);
  for (int k = 0; k < 15; ++k) {
    ChartPoint p = rpoint(g);
    double tol = 1e-7;
    {
      CoordChristoffels c = levi_civita_coord(E2Y, p);
      double e = std::exp(2 * p.y);
      CHECK(std::fabs(c.gamma[0][0][1] - 1.0) <= tol);
      CHECK(std::fabs(c.gamma[0][1][1] + p.x / e) <= tol);
      CHECK(std::fabs(c.gamma[0][1][2] + 0.5 / e) <= tol);
      CHECK(std::fabs(c.gamma[1][0][0] + e) <= tol * e);
      CHECK(std::fabs(c.gamma[2][0][0] - p.x * e) <= tol * e);
      expect_heisenberg_block(c, p.x, tol);
    }
    {
      CoordChristoffels c = levi_civita_coord(E2T, p);
      double e = std::exp(2 * p.t);
      CHECK(std::fabs(c.gamma[0][0][2] - 1.0) <= tol);
      CHECK(std::fabs(c.gamma[0][1][1] + p.x / e) <= tol);
      CHECK(std::fabs(c.gamma[0][1][2] + 0.5 / e) <= tol);
      CHECK(std::fabs(c.gamma[1][0][0] - p.x * e) <= tol * e);
      CHECK(std::fabs(c.gamma[2][0][0] + (p.x * p.x + 1) * e) <= 2 * tol * e);
      expect_heisenberg_block(c, p.x, tol);
    }
  }
}

TEST_CASE("finite difference step converges at second order") {
  MetricField E2Y = MetricField::from_expressions("exp(2*y)", "0", "1");
  ChartPoint p{0.3, 0.4, -0.2};
  double exact = -std::exp(2 * p.y);  // gamma[1][0][0]
  double e1 = std::fabs(levi_civita_coord(E2Y, p, 2e-3).gamma[1][0][0] - exact);
  double e2 = std::fabs(levi_civita_coord(E2Y, p, 1e-3).gamma[1][0][0] - exact);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("vertical covariant derivative splits into j and tau") {
  std::mt19937_64 g(23);
  for (const char* g11 : {"1", "exp(2*y)", "exp(2*t)"}) {
    MetricField G = MetricField::from_expressions(g11, "0", "1");
    for (int k = 0; k < 40; ++k) {
      ChartPoint p = rpoint(g);
      HorizontalVec w{p, in(g, -1, 1), in(g, -1, 1)};
      CoordChristoffels c = levi_civita_coord(G, p);
      Vec3 dT = cov_deriv_T(c, w.coords());
      HorizontalVec jw = j_from_levi_civita(G, w);
      HorizontalVec tw = tau_apply(G, w);
      Vec3 rhs = frame_to_coords(p, jw.a + tw.a, jw.b + tw.b, 0.0);
      CHECK(std::fabs(dT.x - rhs.x) <= 1e-8);
      CHECK(std::fabs(dT.y - rhs.y) <= 1e-8);
      CHECK(std::fabs(dT.t - rhs.t) <= 1e-8);
      // D_. T preserves the unit length of T: <D_w T, T> = 0
      CHECK(std::fabs(omega(p, dT)) <= 1e-8);
    }
  }
}

TEST_CASE("torsion vanishes for t-independent metrics") {
  std::mt19937_64 g(24);
  for (const char* g11 : {"1", "exp(2*y)"}) {
    MetricField G = MetricField::from_expressions(g11, "0", "1");
    for (int k = 0; k < 100; ++k) {
      ChartPoint p = rpoint(g);
      HorizontalVec w{p, in(g, -1, 1), in(g, -1, 1)};
      HorizontalVec tw = tau_apply(G, w);
      CHECK(std::fabs(tw.a) + std::fabs(tw.b) <= 1e-6);
    }
  }
}

TEST_CASE("tau of a t-dependent metric, closed form") {
  // g11 = e^{2t}: tau(X) = X and tau(Y) = 0 (worked out from the Koszul
  // expansion of <D_v T, w>; the only surviving term is d_t g11 / (2 g11)).
  MetricField E2T = MetricField::from_expressions("exp(2*t)", "0", "1");
  std::mt19937_64 g(25);
  for (int k = 0; k < 30; ++k) {
    ChartPoint p = rpoint(g);
    HorizontalVec tx = tau_apply(E2T, HorizontalVec{p, 1, 0});
    HorizontalVec ty = tau_apply(E2T, HorizontalVec{p, 0, 1});
    CHECK(std::fabs(tx.a - 1.0) <= 1e-8);
    CHECK(std::fabs(tx.b) <= 1e-8);
    CHECK(std::fabs(ty.a) <= 1e-8);
    CHECK(std::fabs(ty.b) <= 1e-8);
  }
}

TEST_CASE("tau is self adjoint") {
  MetricField G = MetricField::from_expressions("1 + t*t", "0", "1 + x*x/4");
  std::mt19937_64 g(26);
  for (int k = 0; k < 30; ++k) {
    ChartPoint p = rpoint(g);
    MetricEval m = G.eval(p);
    HorizontalVec v{p, in(g, -1, 1), in(g, -1, 1)};
    HorizontalVec w{p, in(g, -1, 1), in(g, -1, 1)};
    CHECK(inner(m, tau_apply(G, v), w) ==
          doctest::Approx(inner(m, v, tau_apply(G, w))).epsilon(1e-6));
  }
}

TEST_CASE("skew part recovers j") {
  std::mt19937_64 g(27);
  for (const char* g11 : {"1", "exp(2*y)", "1 + x*x"}) {
    MetricField G = MetricField::from_expressions(g11, "0", "1");
    for (int k = 0; k < 30; ++k) {
      ChartPoint p = rpoint(g);
      HorizontalVec v{p, in(g, -1, 1), in(g, -1, 1)};
      HorizontalVec a = j_from_levi_civita(G, v);
      HorizontalVec b = j_apply(G.eval(p), v);
      CHECK(std::fabs(a.a - b.a) <= 1e-6);
      CHECK(std::fabs(a.b - b.b) <= 1e-6);
    }
  }
}

TEST_CASE("horizontal frame connection, flat metric") {
  MetricField H = MetricField::heisenberg();
  std::mt19937_64 g(28);
  for (int k = 0; k < 20; ++k) {
    FrameConnection fc = nabla_frame(H, rpoint(g));
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) CHECK(std::fabs(fc.gamma[a][b][c]) <= 1e-12);
  }
}

TEST_CASE("horizontal frame connection, exponential metric") {
  // g11 = e^{2y}: nabla_X X = -e^{2y} Y, nabla_X Y = X, nabla_Y X = X,
  // nabla_Y Y = 0, from the collapsed Koszul formula with Y(g11) = 2 e^{2y}.
  MetricField E2Y = MetricField::from_expressions("exp(2*y)", "0", "1");
  std::mt19937_64 g(29);
  for (int k = 0; k < 20; ++k) {
    ChartPoint p = rpoint(g);
    FrameConnection fc = nabla_frame(E2Y, p);
    double e = std::exp(2 * p.y);
    CHECK(fc.gamma[1][0][0] == doctest::Approx(-e).epsilon(1e-12));
    CHECK(fc.gamma[0][0][1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fc.gamma[0][1][0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::fabs(fc.gamma[0][0][0]) <= 1e-13);
    CHECK(std::fabs(fc.gamma[1][0][1]) <= 1e-13);
    CHECK(std::fabs(fc.gamma[1][1][0]) <= 1e-13);
    CHECK(std::fabs(fc.gamma[0][1][1]) <= 1e-13);
    CHECK(std::fabs(fc.gamma[1][1][1]) <= 1e-13);
  }
}

TEST_CASE("frame connection is metric and has no horizontal torsion") {
  MetricField G = MetricField::from_expressions("1 + x*x", "x*y/4", "1 + y*y/2");
  std::mt19937_64 g(30);
  for (int k = 0; k < 30; ++k) {
    ChartPoint p = rpoint(g);
    MetricEval m = G.eval(p);
    FrameConnection fc = nabla_frame(m);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        // e_i <e_j, e_k> = <nabla_i e_j, e_k> + <e_j, nabla_i e_k>
        for (int k2 = 0; k2 < 2; ++k2) {
          int e = (j == 0 && k2 == 0) ? 0 : ((j == 1 && k2 == 1) ? 2 : 1);
          double lhs = m.frame_deriv(i, e);
          double rhs = 0.0;
          for (int l = 0; l < 2; ++l) {
            rhs += fc.gamma[l][i][j] * inner(m, l == 0 ? 1.0 : 0.0, l == 0 ? 0.0 : 1.0,
                                             k2 == 0 ? 1.0 : 0.0, k2 == 0 ? 0.0 : 1.0);
            rhs += fc.gamma[l][i][k2] * inner(m, j == 0 ? 1.0 : 0.0, j == 0 ? 0.0 : 1.0,
                                              l == 0 ? 1.0 : 0.0, l == 0 ? 0.0 : 1.0);
          }
          CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
        }
        // horizontal torsion of nabla vanishes leg by leg
        for (int l = 0; l < 2; ++l)
          CHECK(fc.gamma[l][i][j] == doctest::Approx(fc.gamma[l][j][i]).epsilon(1e-10));
      }
    }
  }
}
