#pragma once
// INI-style job descriptions: [system] / [grid] / [run] sections parsed into
// a validated JobConfig. Pure text handling; file I/O belongs to callers.

#include "core/config.hpp"
#include "core/grid.hpp"

#include <string>
#include <vector>

namespace boxatom {

struct JobConfig {
  double Z = 0.0;
  int n_electrons = 0;
  std::string term;             // state label, e.g. "1s2_1S"
  Mode mode = Mode::x_only;
  GridSpec grid;                // n_r / L defaults apply; r_c set per point
  std::vector<double> radii;    // cavity radii in bohr; "inf" -> 40
  std::vector<std::string> radius_tokens; // the tokens as written, for naming
  std::string outputs = ".";    // directory for result files
  std::string reference;        // optional reference CSV path
  double tolerance = 2e-3;      // |computed - reference| gate
  bool tolerance_set = false;   // explicit tolerance overrides per-row values
};

// Parse and validate a config. Accepted keys:
//   [system] Z, N, term
//   [grid]   n_r, L
//   [run]    mode, rc, out, reference, tolerance
// rc takes a comma-separated list; each entry is a positive number or "inf".
// Unknown keys, unknown sections, malformed numbers, and a term whose
// electron count disagrees with N are all rejected with std::invalid_argument
// naming the offending key and line.
JobConfig parse_config(const std::string& text);

} // namespace boxatom
