#include "srmc/gridio.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace srmc {

GridField GridField::make(int nx, int nt, double x0, double x1, double t0, double t1,
                          double fill) {
  if (nx < 2 || nt < 2) throw ValidationError("grid needs at least 2 samples per axis");
  if (!(x1 > x0) || !(t1 > t0)) throw ValidationError("grid bounds must be increasing");
  GridField g;
  g.nx = nx;
  g.nt = nt;
  g.x0 = x0;
  g.x1 = x1;
  g.t0 = t0;
  g.t1 = t1;
  g.v.assign(static_cast<std::size_t>(nx) * nt, fill);
  return g;
}

void save_grid_csv(const GridField& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  put(g.x0); out << ',';
  put(g.x1); out << ',';
  put(g.t0); out << ',';
  put(g.t1); out << ',';
  out << g.nx << ',' << g.nt << '\n';
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.nt; ++j) {
      if (j) out << ',';
      put(g.at(i, j));
    }
    out << '\n';
  }
  if (!out) throw ValidationError("short write to '" + path + "'");
}

namespace {

double parse_double_token(const std::string& tok, const std::string& path) {
  double v = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw ValidationError("bad number '" + tok + "' in grid file '" + path + "'");
  return v;
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  return out;
}

}  // namespace

GridField load_grid_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open grid file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty grid file '" + path + "'");
  auto head = split_commas(line);
  if (head.size() != 6) throw ValidationError("grid header must be x0,x1,t0,t1,nx,nt");
  double x0 = parse_double_token(head[0], path);
  double x1 = parse_double_token(head[1], path);
  double t0 = parse_double_token(head[2], path);
  double t1 = parse_double_token(head[3], path);
  int nx = static_cast<int>(parse_double_token(head[4], path));
  int nt = static_cast<int>(parse_double_token(head[5], path));
  GridField g = GridField::make(nx, nt, x0, x1, t0, t1);
  for (int i = 0; i < nx; ++i) {
    if (!std::getline(in, line))
      throw ValidationError("grid file '" + path + "' is truncated");
    auto toks = split_commas(line);
    if (static_cast<int>(toks.size()) != nt)
      throw ValidationError("grid row length mismatch in '" + path + "'");
    for (int j = 0; j < nt; ++j) g.at(i, j) = parse_double_token(toks[j], path);
  }
  return g;
}

}  // namespace srmc
