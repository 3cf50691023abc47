// C ABI wrapper around the solver core: opaque handles, status codes, and an
// optional caller-provided error buffer on the solve entry point.

#include "boxatom.h"

#include "core/errors.hpp"
#include "core/observables.hpp"
#include "core/runner.hpp"
#include "core/scf.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

struct boxatom_solution {
  boxatom::TermSolution term;
  boxatom::RadialGrid grid;

  boxatom_solution(boxatom::TermSolution t, const boxatom::GridSpec& spec)
      : term(std::move(t)), grid(spec) {}
};

namespace {

void set_error(char* errbuf, size_t errbuf_len, const char* message) {
  if (errbuf == nullptr || errbuf_len == 0) return;
  std::snprintf(errbuf, errbuf_len, "%s", message);
}

} // namespace

extern "C" {

const char* boxatom_version(void) { return "1.0.0"; }

boxatom_status boxatom_solve(double Z, const char* label, const char* mode,
                             double r_c, int n_r, boxatom_solution** out,
                             char* errbuf, size_t errbuf_len) {
  set_error(errbuf, errbuf_len, "");
  if (out == nullptr || label == nullptr || mode == nullptr) {
    set_error(errbuf, errbuf_len, "out, label, and mode must be non-NULL");
    return BOXATOM_INVALID_ARGUMENT;
  }
  if (!(r_c > 0.0)) { // rejects zero, negatives, and NaN in one test
    set_error(errbuf, errbuf_len, "r_c must be a positive radius in bohr");
    return BOXATOM_INVALID_ARGUMENT;
  }
  try {
    boxatom::GridSpec spec;
    if (n_r != 0) spec.n_r = n_r;
    spec.r_c = std::isinf(r_c) ? boxatom::kFreeBoxRadius : r_c;
    const boxatom::Mode m = boxatom::mode_from_string(mode);
    boxatom::TermSolution term = boxatom::solve_term(Z, label, spec, m);
    *out = new boxatom_solution(std::move(term), spec);
    return BOXATOM_OK;
  } catch (const std::invalid_argument& e) {
    set_error(errbuf, errbuf_len, e.what());
    return BOXATOM_INVALID_ARGUMENT;
  } catch (const boxatom::ConvergenceError& e) {
    set_error(errbuf, errbuf_len, e.what());
    return BOXATOM_NOT_CONVERGED;
  } catch (const std::exception& e) {
    set_error(errbuf, errbuf_len, e.what());
    return BOXATOM_INTERNAL_ERROR;
  }
}

void boxatom_free(boxatom_solution* solution) { delete solution; }

boxatom_status boxatom_energy(const boxatom_solution* solution,
                              const char* component, double* out) {
  if (solution == nullptr || component == nullptr || out == nullptr)
    return BOXATOM_INVALID_ARGUMENT;
  const boxatom::TermSolution& t = solution->term;
  double value;
  if (std::strcmp(component, "E_total") == 0) value = t.E_total;
  else if (std::strcmp(component, "T") == 0) value = t.T;
  else if (std::strcmp(component, "V_en") == 0) value = t.V_en;
  else if (std::strcmp(component, "E_H") == 0) value = t.E_H;
  else if (std::strcmp(component, "E_x") == 0) value = t.E_x;
  else if (std::strcmp(component, "E_c") == 0) value = t.E_c;
  else if (std::strcmp(component, "V_ee") == 0) value = t.V_ee;
  else if (std::strcmp(component, "eigenvalue_sum") == 0)
    value = t.eigenvalue_sum;
  else return BOXATOM_INVALID_ARGUMENT;
  *out = value;
  return BOXATOM_OK;
}

int boxatom_iterations(const boxatom_solution* solution) {
  return solution == nullptr ? -1 : solution->term.iterations;
}

boxatom_status boxatom_moment(const boxatom_solution* solution, int k,
                              double* out) {
  if (solution == nullptr || out == nullptr) return BOXATOM_INVALID_ARGUMENT;
  try {
    *out = boxatom::radial_moment(solution->term.state.density, k,
                                  solution->grid);
    return BOXATOM_OK;
  } catch (const std::invalid_argument&) {
    return BOXATOM_INVALID_ARGUMENT;
  } catch (const std::exception&) {
    return BOXATOM_INTERNAL_ERROR;
  }
}

boxatom_status boxatom_density_profile(const boxatom_solution* solution,
                                       int n_samples, double* r, double* d) {
  if (solution == nullptr || r == nullptr || d == nullptr || n_samples < 2)
    return BOXATOM_INVALID_ARGUMENT;
  try {
    const boxatom::RadialDistribution dist = boxatom::radial_distribution(
        solution->term.state, solution->grid, n_samples);
    for (int i = 0; i < n_samples; ++i) {
      r[i] = dist.r_uniform[i];
      d[i] = dist.total_uniform[i];
    }
    return BOXATOM_OK;
  } catch (const std::exception&) {
    return BOXATOM_INTERNAL_ERROR;
  }
}

boxatom_status boxatom_potential_profile(const boxatom_solution* solution,
                                         const char* name, int n_samples,
                                         double* r, double* v) {
  if (solution == nullptr || name == nullptr || r == nullptr || v == nullptr ||
      n_samples < 2)
    return BOXATOM_INVALID_ARGUMENT;
  const boxatom::PotentialSet& pots = solution->term.state.potentials;
  const Eigen::VectorXd* field = nullptr;
  if (std::strcmp(name, "v_H") == 0) field = &pots.v_H;
  else if (std::strcmp(name, "v_x_up") == 0) field = &pots.v_x_up;
  else if (std::strcmp(name, "v_x_down") == 0) field = &pots.v_x_down;
  else if (std::strcmp(name, "v_c_up") == 0) field = &pots.v_c_up;
  else if (std::strcmp(name, "v_c_down") == 0) field = &pots.v_c_down;
  else return BOXATOM_INVALID_ARGUMENT;
  try {
    const boxatom::RadialGrid& grid = solution->grid;
    const double r_c = grid.r_c();
    for (int i = 0; i < n_samples; ++i) {
      const double radius = r_c * i / (n_samples - 1);
      r[i] = radius;
      v[i] = grid.interpolate(*field, radius);
    }
    return BOXATOM_OK;
  } catch (const std::exception&) {
    return BOXATOM_INTERNAL_ERROR;
  }
}

boxatom_status boxatom_orbital_profile(const boxatom_solution* solution,
                                       int index, int n_samples, double* r,
                                       double* d) {
  if (solution == nullptr || r == nullptr || d == nullptr || n_samples < 2)
    return BOXATOM_INVALID_ARGUMENT;
  const auto& orbitals = solution->term.state.orbitals;
  if (index < 0 || index >= static_cast<int>(orbitals.size()))
    return BOXATOM_INVALID_ARGUMENT;
  try {
    const boxatom::RadialDistribution dist = boxatom::radial_distribution(
        solution->term.state, solution->grid, n_samples);
    for (int i = 0; i < n_samples; ++i) {
      r[i] = dist.r_uniform[i];
      d[i] = dist.orbital_uniform[index][i];
    }
    return BOXATOM_OK;
  } catch (const std::exception&) {
    return BOXATOM_INTERNAL_ERROR;
  }
}

int boxatom_orbital_count(const boxatom_solution* solution) {
  if (solution == nullptr) return -1;
  return static_cast<int>(solution->term.state.orbitals.size());
}

boxatom_status boxatom_orbital(const boxatom_solution* solution, int index,
                               int* n, int* l, int* spin, double* occupancy,
                               double* eigenvalue) {
  if (solution == nullptr) return BOXATOM_INVALID_ARGUMENT;
  const auto& orbitals = solution->term.state.orbitals;
  if (index < 0 || index >= static_cast<int>(orbitals.size()))
    return BOXATOM_INVALID_ARGUMENT;
  const boxatom::Orbital& orb = orbitals[index];
  if (n != nullptr) *n = orb.n;
  if (l != nullptr) *l = orb.l;
  if (spin != nullptr) *spin = orb.spin == boxatom::Spin::up ? 1 : -1;
  if (occupancy != nullptr) *occupancy = orb.occupancy;
  if (eigenvalue != nullptr) *eigenvalue = orb.eps;
  return BOXATOM_OK;
}

boxatom_status boxatom_run_config(const char* config_path, const char* out_dir,
                                  int jobs, double tolerance, int* verdict,
                                  char* errbuf, size_t errbuf_len) {
  set_error(errbuf, errbuf_len, "");
  if (config_path == nullptr || verdict == nullptr) {
    set_error(errbuf, errbuf_len, "config_path and verdict must be non-NULL");
    return BOXATOM_INVALID_ARGUMENT;
  }
  try {
    std::ifstream in(config_path);
    if (!in) {
      set_error(errbuf, errbuf_len,
                (std::string("cannot open config file ") + config_path).c_str());
      return BOXATOM_INVALID_ARGUMENT;
    }
    std::ostringstream text;
    text << in.rdbuf();
    boxatom::JobConfig job = boxatom::parse_config(text.str());
    if (out_dir != nullptr) job.outputs = out_dir;
    if (tolerance > 0.0) {
      job.tolerance = tolerance;
      job.tolerance_set = true;
    }
    const boxatom::ScanOutcome outcome =
        boxatom::run_scan(job, jobs > 1 ? jobs : 1);
    *verdict = outcome.exit_code;
    return BOXATOM_OK;
  } catch (const std::invalid_argument& e) {
    set_error(errbuf, errbuf_len, e.what());
    return BOXATOM_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    set_error(errbuf, errbuf_len, e.what());
    return BOXATOM_INTERNAL_ERROR;
  }
}

boxatom_status boxatom_compare_files(const char* computed_csv,
                                     const char* reference_csv,
                                     double tolerance, int* verdict,
                                     char** report_csv, char* errbuf,
                                     size_t errbuf_len) {
  set_error(errbuf, errbuf_len, "");
  if (computed_csv == nullptr || reference_csv == nullptr ||
      verdict == nullptr) {
    set_error(errbuf, errbuf_len,
              "computed_csv, reference_csv, and verdict must be non-NULL");
    return BOXATOM_INVALID_ARGUMENT;
  }
  for (const char* path : {computed_csv, reference_csv}) {
    std::ifstream probe(path);
    if (!probe) {
      set_error(errbuf, errbuf_len,
                (std::string("cannot open ") + path).c_str());
      return BOXATOM_INVALID_ARGUMENT;
    }
  }
  try {
    const boxatom::ComparisonReport report = boxatom::compare_csv(
        computed_csv, reference_csv, tolerance > 0.0 ? tolerance : -1.0);
    bool any_failed_run = false;
    for (const auto& row : report.rows)
      if (row.failed_run) any_failed_run = true;
    *verdict = any_failed_run ? 1 : (report.all_pass ? 0 : 2);
    if (report_csv != nullptr) {
      const std::string text = boxatom::comparison_csv_text(report);
      char* owned = static_cast<char*>(std::malloc(text.size() + 1));
      if (owned == nullptr) {
        set_error(errbuf, errbuf_len, "out of memory for the report text");
        return BOXATOM_INTERNAL_ERROR;
      }
      std::memcpy(owned, text.c_str(), text.size() + 1);
      *report_csv = owned;
    }
    return BOXATOM_OK;
  } catch (const std::invalid_argument& e) {
    set_error(errbuf, errbuf_len, e.what());
    return BOXATOM_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    set_error(errbuf, errbuf_len, e.what());
    return BOXATOM_INTERNAL_ERROR;
  }
}

void boxatom_text_free(char* text) { std::free(text); }

} // extern "C"
