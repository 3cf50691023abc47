#include "core/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

namespace boxatom {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

bool same_radius(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

// One scan point: full term solve with per-point radius, failures captured.
ScanPoint solve_point(const JobConfig& job, size_t index) {
  ScanPoint pt;
  pt.r_c = job.radii[index];
  pt.token = job.radius_tokens.empty() ? fmt(pt.r_c)
                                       : job.radius_tokens[index];
  GridSpec spec = job.grid;
  spec.r_c = pt.r_c;
  try {
    pt.term = solve_term(job.Z, job.term, spec, job.mode);
    pt.converged = true;
  } catch (const std::exception& e) {
    pt.converged = false;
    pt.error = e.what();
  }
  return pt;
}

const char* kPointHeader =
    "Z,term,mode,r_c,status,E_total,T,V_en,E_H,E_x,E_c,V_ee,"
    "eigenvalue_sum,iterations\n";

std::string point_row(const JobConfig& job, const ScanPoint& pt) {
  std::ostringstream row;
  row << fmt(job.Z) << ',' << job.term << ',' << to_string(job.mode) << ','
      << fmt(pt.r_c) << ',';
  if (pt.converged) {
    const TermSolution& s = pt.term;
    row << "ok," << fmt(s.E_total) << ',' << fmt(s.T) << ',' << fmt(s.V_en)
        << ',' << fmt(s.E_H) << ',' << fmt(s.E_x) << ',' << fmt(s.E_c) << ','
        << fmt(s.V_ee) << ',' << fmt(s.eigenvalue_sum) << ',' << s.iterations;
  } else {
    row << "FAILED,nan,nan,nan,nan,nan,nan,nan,nan,0";
  }
  row << '\n';
  return row.str();
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << body;
  if (!out) throw std::runtime_error("short write to " + path);
}

void append_log(const std::string& path, const std::string& message) {
  std::ofstream out(path, std::ios::app);
  if (!out) return; // the log is best-effort by design
  char stamp[32];
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc;
  gmtime_r(&now, &tm_utc);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  out << stamp << ' ' << message << '\n';
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  return cells;
}

double cell_number(const std::string& cell, const std::string& path,
                   int line_no) {
  try {
    size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument("trailing text");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(path + " line " + std::to_string(line_no) +
                             ": '" + cell + "' is not a number");
  }
}

} // namespace

std::vector<ReferenceRow> load_reference_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open reference file " + path);
  std::string line;
  int line_no = 0;
  std::vector<std::string> header;
  int col_z = -1, col_term = -1, col_mode = -1, col_rc = -1, col_e = -1,
      col_tol = -1;
  std::vector<ReferenceRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (header.empty()) {
      header = split_csv_line(line);
      for (int i = 0; i < static_cast<int>(header.size()); ++i) {
        if (header[i] == "Z") col_z = i;
        else if (header[i] == "term") col_term = i;
        else if (header[i] == "mode") col_mode = i;
        else if (header[i] == "r_c") col_rc = i;
        else if (header[i] == "E_total") col_e = i;
        else if (header[i] == "tol") col_tol = i;
      }
      if (col_z < 0 || col_term < 0 || col_mode < 0 || col_rc < 0 || col_e < 0)
        throw std::runtime_error(path +
                                 ": header must name Z,term,mode,r_c,E_total");
      continue;
    }
    const auto cells = split_csv_line(line);
    const int needed =
        std::max({col_z, col_term, col_mode, col_rc, col_e, col_tol});
    if (static_cast<int>(cells.size()) <= needed)
      throw std::runtime_error(path + " line " + std::to_string(line_no) +
                               ": too few columns");
    ReferenceRow row;
    row.Z = cell_number(cells[col_z], path, line_no);
    row.term = cells[col_term];
    try {
      row.mode = mode_from_string(cells[col_mode]);
    } catch (const std::exception& e) {
      throw std::runtime_error(path + " line " + std::to_string(line_no) +
                               ": " + e.what());
    }
    row.r_c = cell_number(cells[col_rc], path, line_no);
    row.E_total = cell_number(cells[col_e], path, line_no);
    if (col_tol >= 0 && col_tol < static_cast<int>(cells.size()) &&
        !cells[col_tol].empty()) {
      row.tol = cell_number(cells[col_tol], path, line_no);
      row.has_tol = true;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ComparisonReport compare_to_reference(const JobConfig& job,
                                      const std::vector<ScanPoint>& points,
                                      const std::vector<ReferenceRow>& table) {
  ComparisonReport report;
  for (const auto& pt : points) {
    const ReferenceRow* match = nullptr;
    for (const auto& ref : table) {
      if (ref.term == job.term && ref.mode == job.mode &&
          same_radius(ref.Z, job.Z) && same_radius(ref.r_c, pt.r_c)) {
        match = &ref;
        break;
      }
    }
    if (!match) continue;
    ComparisonRow row;
    row.r_c = pt.r_c;
    row.reference = match->E_total;
    row.tolerance = (!job.tolerance_set && match->has_tol) ? match->tol
                                                           : job.tolerance;
    if (pt.converged) {
      row.computed = pt.term.E_total;
      row.abs_dev = std::abs(row.computed - row.reference);
      row.rel_dev = row.abs_dev / std::abs(row.reference);
      row.pass = row.abs_dev <= row.tolerance;
    } else {
      row.failed_run = true;
      row.computed = kNaN;
      row.abs_dev = kNaN;
      row.rel_dev = kNaN;
      row.pass = false;
    }
    report.all_pass = report.all_pass && row.pass;
    report.rows.push_back(row);
  }
  return report;
}

std::string comparison_csv_text(const ComparisonReport& report) {
  std::ostringstream out;
  out << "r_c,computed,reference,abs_dev,rel_dev,tolerance,status\n";
  for (const auto& row : report.rows) {
    out << fmt(row.r_c) << ',' << fmt(row.computed) << ','
        << fmt(row.reference) << ',' << fmt(row.abs_dev) << ','
        << fmt(row.rel_dev) << ',' << fmt(row.tolerance) << ','
        << (row.failed_run ? "FAILED" : (row.pass ? "pass" : "fail")) << '\n';
  }
  return out.str();
}

ScanOutcome run_scan(const JobConfig& job, int jobs) {
  ScanOutcome outcome;
  const size_t n = job.radii.size();
  outcome.points.resize(n);

  if (jobs <= 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) outcome.points[i] = solve_point(job, i);
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&]() {
      for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
        outcome.points[i] = solve_point(job, i);
    };
    std::vector<std::thread> pool;
    const size_t count = std::min<size_t>(jobs, n);
    pool.reserve(count);
    for (size_t t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  namespace fs = std::filesystem;
  fs::create_directories(job.outputs);
  outcome.log_path = (fs::path(job.outputs) / "scan.log").string();
  append_log(outcome.log_path,
             "scan start: term=" + job.term + " mode=" + to_string(job.mode) +
                 " points=" + std::to_string(n));

  bool any_runtime_failure = false;
  std::ostringstream summary;
  summary << kPointHeader;
  for (const auto& pt : outcome.points) {
    const std::string row = point_row(job, pt);
    summary << row;
    const std::string name =
        job.term + "_" + to_string(job.mode) + "_rc" + pt.token + ".csv";
    const std::string path = (fs::path(job.outputs) / name).string();
    write_file(path, std::string(kPointHeader) + row);
    outcome.csv_paths.push_back(path);
    if (!pt.converged) {
      any_runtime_failure = true;
      append_log(outcome.log_path,
                 "point rc=" + pt.token + " FAILED: " + pt.error);
    }
  }
  outcome.summary_path =
      (fs::path(job.outputs) / "scan_summary.csv").string();
  write_file(outcome.summary_path, summary.str());

  bool tolerance_failure = false;
  if (!job.reference.empty()) {
    const auto table = load_reference_csv(job.reference);
    outcome.report = compare_to_reference(job, outcome.points, table);
    outcome.comparison_path =
        (fs::path(job.outputs) / "comparison.csv").string();
    write_file(outcome.comparison_path, comparison_csv_text(outcome.report));
    for (const auto& row : outcome.report.rows)
      if (!row.pass && !row.failed_run) tolerance_failure = true;
    append_log(outcome.log_path,
               "comparison rows=" + std::to_string(outcome.report.rows.size()) +
                   (outcome.report.all_pass ? " all pass" : " with failures"));
  }

  outcome.exit_code = any_runtime_failure ? 1 : (tolerance_failure ? 2 : 0);
  append_log(outcome.log_path,
             "scan end: exit=" + std::to_string(outcome.exit_code));
  return outcome;
}

ComparisonReport compare_csv(const std::string& computed_path,
                             const std::string& reference_path,
                             double tolerance_override) {
  // read the computed summary back into pseudo scan points
  std::ifstream in(computed_path);
  if (!in)
    throw std::runtime_error("cannot open computed file " + computed_path);
  std::string line;
  int line_no = 0;
  std::vector<std::string> header;
  int col_z = -1, col_term = -1, col_mode = -1, col_rc = -1, col_status = -1,
      col_e = -1;
  JobConfig pseudo;
  pseudo.tolerance_set = tolerance_override > 0.0;
  if (pseudo.tolerance_set) pseudo.tolerance = tolerance_override;
  std::vector<ScanPoint> points;
  bool first_row = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (header.empty()) {
      header = split_csv_line(line);
      for (int i = 0; i < static_cast<int>(header.size()); ++i) {
        if (header[i] == "Z") col_z = i;
        else if (header[i] == "term") col_term = i;
        else if (header[i] == "mode") col_mode = i;
        else if (header[i] == "r_c") col_rc = i;
        else if (header[i] == "status") col_status = i;
        else if (header[i] == "E_total") col_e = i;
      }
      if (col_z < 0 || col_term < 0 || col_mode < 0 || col_rc < 0 ||
          col_status < 0 || col_e < 0)
        throw std::runtime_error(
            computed_path + ": header must name Z,term,mode,r_c,status,E_total");
      continue;
    }
    const auto cells = split_csv_line(line);
    const int needed =
        std::max({col_z, col_term, col_mode, col_rc, col_status, col_e});
    if (static_cast<int>(cells.size()) <= needed)
      throw std::runtime_error(computed_path + " line " +
                               std::to_string(line_no) + ": too few columns");
    if (first_row) {
      pseudo.Z = cell_number(cells[col_z], computed_path, line_no);
      pseudo.term = cells[col_term];
      pseudo.mode = mode_from_string(cells[col_mode]);
      first_row = false;
    }
    ScanPoint pt;
    pt.r_c = cell_number(cells[col_rc], computed_path, line_no);
    pt.converged = cells[col_status] == "ok";
    if (pt.converged)
      pt.term.E_total = cell_number(cells[col_e], computed_path, line_no);
    points.push_back(std::move(pt));
  }
  if (first_row)
    throw std::runtime_error(computed_path + ": no data rows");
  return compare_to_reference(pseudo, points,
                              load_reference_csv(reference_path));
}

} // namespace boxatom
