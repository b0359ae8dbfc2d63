#pragma once
// Rectangular sample grids with CSV round-trip.
//
// File layout:
//   x0,x1,t0,t1,nx,nt
//   v(0,0),v(0,1),...,v(0,nt-1)
//   ...
//   v(nx-1,0),...
// Row i holds the t-samples at x = x0 + i*hx.  Values use 17 significant
// digits so load(save(g)) reproduces g bit for bit.

#include <string>
#include <vector>

#include "srmc/error.hpp"

namespace srmc {

struct GridField {
  int nx = 0, nt = 0;
  double x0 = 0.0, x1 = 1.0, t0 = 0.0, t1 = 1.0;
  std::vector<double> v;  // row-major, index i*nt + j

  double& at(int i, int j) { return v[static_cast<std::size_t>(i) * nt + j]; }
  double at(int i, int j) const { return v[static_cast<std::size_t>(i) * nt + j]; }
  double hx() const { return (x1 - x0) / (nx - 1); }
  double ht() const { return (t1 - t0) / (nt - 1); }
  double xcoord(int i) const { return x0 + i * hx(); }
  double tcoord(int j) const { return t0 + j * ht(); }
  bool interior(int i, int j) const { return i > 0 && i < nx - 1 && j > 0 && j < nt - 1; }

  static GridField make(int nx, int nt, double x0, double x1, double t0, double t1,
                        double fill = 0.0);
};

void save_grid_csv(const GridField& g, const std::string& path);
GridField load_grid_csv(const std::string& path);

}  // namespace srmc
