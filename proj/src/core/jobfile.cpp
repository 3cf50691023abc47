#include "core/jobfile.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>
#include <string>

namespace boxatom {
namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw std::invalid_argument("config line " + std::to_string(line) + ": " +
                              what);
}

double parse_number(const std::string& value, int line,
                    const std::string& key) {
  try {
    size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing text");
    return v;
  } catch (const std::exception&) {
    fail(line, "value '" + value + "' for key '" + key + "' is not a number");
  }
}

} // namespace

JobConfig parse_config(const std::string& text) {
  JobConfig job;
  bool have_z = false, have_n = false, have_term = false, have_rc = false;

  std::istringstream stream(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    // strip comments, both styles
    for (char marker : {'#', ';'}) {
      const size_t pos = raw.find(marker);
      if (pos != std::string::npos) raw.erase(pos);
    }
    const std::string line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "system" && section != "grid" && section != "run")
        fail(line_no, "unknown section [" + section + "]");
      continue;
    }

    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(line_no, "expected key=value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      fail(line_no, "key '" + key + "' appears before any section");
    if (value.empty()) fail(line_no, "key '" + key + "' has no value");

    if (section == "system") {
      if (key == "Z") {
        job.Z = parse_number(value, line_no, key);
        have_z = true;
      } else if (key == "N") {
        const double n = parse_number(value, line_no, key);
        job.n_electrons = static_cast<int>(n);
        if (job.n_electrons != n || job.n_electrons <= 0)
          fail(line_no, "N must be a positive integer");
        have_n = true;
      } else if (key == "term") {
        job.term = value;
        have_term = true;
      } else {
        fail(line_no, "unknown key '" + key + "' in [system]");
      }
    } else if (section == "grid") {
      if (key == "n_r") {
        const double n = parse_number(value, line_no, key);
        job.grid.n_r = static_cast<int>(n);
        if (job.grid.n_r != n) fail(line_no, "n_r must be an integer");
      } else if (key == "L") {
        job.grid.L = parse_number(value, line_no, key);
      } else {
        fail(line_no, "unknown key '" + key + "' in [grid]");
      }
    } else { // run
      if (key == "mode") {
        try {
          job.mode = mode_from_string(value);
        } catch (const std::exception& e) {
          fail(line_no, e.what());
        }
      } else if (key == "rc") {
        std::istringstream list(value);
        std::string token;
        while (std::getline(list, token, ',')) {
          token = trim(token);
          if (token.empty()) continue;
          double rc;
          if (token == "inf") {
            rc = kFreeBoxRadius;
          } else {
            rc = parse_number(token, line_no, key);
            if (rc <= 0.0) fail(line_no, "rc values must be positive");
          }
          job.radii.push_back(rc);
          job.radius_tokens.push_back(token);
        }
        have_rc = !job.radii.empty();
        if (!have_rc) fail(line_no, "rc list is empty");
      } else if (key == "out") {
        job.outputs = value;
      } else if (key == "reference") {
        job.reference = value;
      } else if (key == "tolerance") {
        job.tolerance = parse_number(value, line_no, key);
        if (job.tolerance <= 0.0) fail(line_no, "tolerance must be positive");
        job.tolerance_set = true;
      } else {
        fail(line_no, "unknown key '" + key + "' in [run]");
      }
    }
  }

  if (!have_z) throw std::invalid_argument("config: missing Z in [system]");
  if (!have_n) throw std::invalid_argument("config: missing N in [system]");
  if (!have_term)
    throw std::invalid_argument("config: missing term in [system]");
  if (!have_rc)
    throw std::invalid_argument("config: missing rc list in [run]");

  job.grid.validate();

  // the term must describe exactly the declared electron count
  const Configuration probe = configuration_from_label(job.Z, job.term);
  const double n_term = probe.n_electrons();
  if (static_cast<double>(job.n_electrons) != n_term) {
    std::ostringstream msg;
    msg << "config: term " << job.term << " describes " << n_term
        << " electrons but N = " << job.n_electrons;
    throw std::invalid_argument(msg.str());
  }
  return job;
}

} // namespace boxatom
