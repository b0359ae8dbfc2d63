#pragma once
// Surfaces presented as intrinsic graphs over the vertical plane y = 0.
//
// A function u(x, t) on a parameter rectangle D gives the embedding
//   Phi(x, t) = (x, u(x, t), t - x u(x, t)),
// whose tangents decompose in the frame as
//   E1 = X + u_x Y - u T,      E2 = u_t Y + T.
// The horizontal combination Z~ = E1 + u E2 = X + W Y with the slope
//   W = u_x + u u_t
// spans the characteristic direction; Z = Z~/|Z~| is its unit field and
// nu_h = -j(Z) the horizontal normal.  The graph area integrand is
//   |Z~| = sqrt(g22 W^2 + 2 g12 W + g11)  (metric entries at Phi).

#include <memory>
#include <optional>

#include "srmc/chart.hpp"
#include "srmc/gridio.hpp"

namespace srmc {

struct GraphDomain {
  double x0 = 0.0, x1 = 1.0, t0 = 0.0, t1 = 1.0;

  double width() const { return x1 - x0; }
  double height() const { return t1 - t0; }
  double measure() const { return width() * height(); }
  bool contains(double x, double t, double pad = 0.0) const {
    return x >= x0 - pad && x <= x1 + pad && t >= t0 - pad && t <= t1 + pad;
  }
};

// Graph function over (x, t), backed by an expression or by a bilinearly
// interpolated grid.  Grid partials are cellwise rational (constant along
// their own axis); on a cell edge the evaluation is one-sided and flagged.
class GraphFunction {
 public:
  struct Eval {
    double u = 0.0, ux = 0.0, ut = 0.0;
    bool on_cell_edge = false;
  };

  GraphFunction() = default;

  static GraphFunction from_expression(std::string_view expr);
  static GraphFunction from_expression(ScalarField field);
  static GraphFunction from_grid(GridField grid);

  Eval eval(double x, double t) const;
  double value(double x, double t) const { return eval(x, t).u; }

  bool smooth() const { return grid_ == nullptr; }
  const GridField* grid() const { return grid_.get(); }
  const ScalarField& field() const { return field_; }

  // sup of |u_x|, |u_t| over sampled points (expression) or difference
  // quotients (grid); a cheap Lipschitz bound for step-size choices.
  double lipschitz_bound(const GraphDomain& d) const;

 private:
  ScalarField field_;
  std::shared_ptr<const GridField> grid_;
};

struct TangentPair {
  Vec3 e1, e2;                     // coordinate components
  std::array<double, 3> e1_frame;  // (1, u_x, -u)
  std::array<double, 3> e2_frame;  // (0, u_t, 1)
  bool on_cell_edge = false;
};

ChartPoint embed(const GraphFunction& u, double x, double t);
TangentPair tangents(const GraphFunction& u, double x, double t);
double char_slope(const GraphFunction& u, double x, double t);  // W

HorizontalVec unit_Z(const GraphFunction& u, double x, double t, const MetricField& G);
double area_element(const GraphFunction& u, double x, double t, const MetricField& G);
HorizontalVec nu_h(const GraphFunction& u, double x, double t, const MetricField& G);

// Norm of the horizontal part of the unit Riemannian normal, oriented so
// that <N, nu_h> >= 0.  Satisfies |N_h| * (Riemannian area element) =
// area_element exactly.
double n_h_norm(const GraphFunction& u, double x, double t, const MetricField& G);
double riemannian_area_element(const GraphFunction& u, double x, double t, const MetricField& G);

// Residual of the algebraic identities tying <Z,X> and <Z,Y> together:
//   1 = det(G)^{-1} (g22 <Z,X>^2 - 2 g12 <Z,X><Z,Y> + g11 <Z,Y>^2)
//   <Z,X> = (g12 <Z,Y> + sqrt(det G (g22 - <Z,Y>^2))) / g22
// Returns the larger of the two residuals; throws if <Z,Y>^2 >= g22.
double zx_check(const GraphFunction& u, double x, double t, const MetricField& G);

}  // namespace srmc
