#pragma once
// Batch front door: srmc <command> --config <file> --out <dir>.
// Commands: area variation foliate geodesic curvature minimize-intrinsic
// minimize-tgraph check.  Exit codes: 0 ok, 2 validation problem, 3
// numerical failure (including failed checks and stalled solves).

#include <iosfwd>

namespace srmc {

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int cli_main(int argc, const char* const* argv);  // stdout / stderr

}  // namespace srmc
