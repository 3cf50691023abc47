#pragma once
// Job orchestration: run an r_c scan from a JobConfig, write per-point and
// summary CSVs (deterministic bodies; timestamps only in the sidecar log),
// and grade the results against a reference table when one is configured.

#include "core/jobfile.hpp"
#include "core/scf.hpp"

#include <string>
#include <vector>

namespace boxatom {

struct ScanPoint {
  double r_c = 0.0;
  std::string token;     // radius as written in the config ("inf", "0.5", ...)
  bool converged = false;
  std::string error;     // failure description when !converged
  TermSolution term;     // energy report and solved state, when converged
};

struct ComparisonRow {
  double r_c = 0.0;
  bool failed_run = false; // the SCF never produced a value
  double computed = 0.0;   // NaN when failed_run
  double reference = 0.0;
  double abs_dev = 0.0;    // NaN when failed_run
  double rel_dev = 0.0;
  double tolerance = 0.0;  // the gate actually applied to this row
  bool pass = false;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows; // scan order, reference-matched rows only
  bool all_pass = true;
};

struct ScanOutcome {
  // 0: every graded row passed; 2: a graded row missed its tolerance;
  // 1: an SCF runtime failure at any point. Environment-level trouble
  // (unreadable reference table, unwritable output directory) throws
  // instead, for the caller to map onto its own error reporting.
  int exit_code = 0;
  std::vector<ScanPoint> points;        // input order
  std::vector<std::string> csv_paths;   // per-point files, input order
  std::string summary_path;
  std::string comparison_path;          // empty when no reference configured
  std::string log_path;
  ComparisonReport report;
};

// Run every radius of the job with its functional mode. jobs > 1 dispatches
// points to that many worker threads; results are gathered and written in
// input order either way, so output bytes do not depend on scheduling.
ScanOutcome run_scan(const JobConfig& job, int jobs = 1);

struct ReferenceRow {
  double Z = 0.0;
  std::string term;
  Mode mode = Mode::x_only;
  double r_c = 0.0;
  double E_total = 0.0;
  double tol = 0.0;
  bool has_tol = false;
};

// Load a reference table: header row first, columns Z,term,mode,r_c,E_total
// with an optional tol column; '#' lines are comments. Throws
// std::runtime_error naming the file and line on malformed content.
std::vector<ReferenceRow> load_reference_csv(const std::string& path);

// Grade computed totals against reference rows matched on (Z, term, mode,
// r_c). An explicitly set job tolerance overrides per-row tol values.
ComparisonReport compare_to_reference(const JobConfig& job,
                                      const std::vector<ScanPoint>& points,
                                      const std::vector<ReferenceRow>& table);

// Grade a previously written summary CSV against a reference CSV (the CLI
// `compare` subcommand). tolerance_override < 0 keeps file/row defaults.
ComparisonReport compare_csv(const std::string& computed_path,
                             const std::string& reference_path,
                             double tolerance_override);

// Serialize a report in the comparison-file schema (header + rows).
std::string comparison_csv_text(const ComparisonReport& report);

} // namespace boxatom
