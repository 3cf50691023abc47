#pragma once
// Self-consistent-field driver: iterate orbitals -> density -> potentials
// with linear mixing until the energy and potential changes fall under the
// convergence thresholds, then assemble total-energy components. Also hosts
// the diagonal sum rule that turns determinant energies into term energies.

#include "core/config.hpp"
#include "core/eigensolver.hpp"
#include "core/errors.hpp"
#include "core/fields.hpp"
#include "core/grid.hpp"

#include <string>
#include <utility>
#include <vector>

namespace boxatom {

struct ScfOptions {
  int max_iter = 400;
  double mixing = 0.3;        // linear mixing weight on the fresh potential
  double min_mixing = 0.02;   // floor reached by adaptive halving
  double energy_tol = 1e-6;   // |E_i - E_{i-1}| threshold, hartree
  double potential_tol = 1e-5; // max |v_i - v_{i-1}| threshold, hartree
};

struct IterationRecord {
  int iteration = 0;
  double E_total = 0.0;
  double delta_E = 0.0;      // against the previous iteration
  double max_delta_v = 0.0;  // sup-norm change of the computed potential
  double mixing = 0.0;       // weight in effect when this iterate was built
};

// Non-convergence (budget exhausted or sustained oscillation at the mixing
// floor). Carries the full iteration history for diagnosis.
struct ScfNotConverged : ConvergenceError {
  ScfNotConverged(const std::string& message,
                  std::vector<IterationRecord> hist)
      : ConvergenceError(message), history(std::move(hist)) {}
  std::vector<IterationRecord> history;
};

struct SCFResult {
  Configuration config;
  Mode mode = Mode::x_only;
  std::vector<Orbital> orbitals; // converged, in config.shells order
  DensityField density;          // built from the converged orbitals
  PotentialSet potentials;       // rebuilt from the converged density

  double T = 0.0;     // kinetic (radial + centrifugal)
  double V_en = 0.0;  // nuclear attraction
  double E_H = 0.0;   // classical Coulomb
  double E_x = 0.0;   // exchange (pair energy minus Hartree)
  double E_c = 0.0;   // correlation for the active functional
  double V_ee = 0.0;  // E_H + E_x + E_c
  double E_total = 0.0;
  double eigenvalue_sum = 0.0; // sum of occ * eps

  // Interior input potentials of the final eigensolve, per spin; they pair
  // with eigenvalue_sum in the bookkeeping identity
  //   sum occ*eps = T + sum_sigma int 4pi r^2 rho_sigma v_input_sigma dr.
  Eigen::VectorXd v_input_up, v_input_down;

  int iterations = 0;
  std::vector<IterationRecord> history;
};

// Run one determinant-level SCF. Throws std::invalid_argument for invalid
// configurations or r_c <= 0.05 bohr, ScfNotConverged on failure to meet
// the thresholds. Deterministic: identical inputs give identical histories.
SCFResult scf_solve(const Configuration& config, const GridSpec& spec,
                    Mode mode, const ScfOptions& options = {});

struct TermEnergy {
  std::string term_label;
  double E_total = 0.0;
};

// Diagonal-sum-rule output for one singly-excited family (e.g. "1s2s"):
// E(triplet) is the high-spin determinant energy, E(singlet) is
// 2 E(M_S=0 average) - E(triplet). The underlying states ride along.
struct MultipletEnergies {
  TermEnergy triplet;
  TermEnergy singlet;
  SCFResult triplet_state;
  SCFResult ms0_state;
};

// family must name exactly two singly-occupied shells ("1s2s", "1s2p",
// "1s3d"); anything closed-shell or multiply occupied is rejected with
// std::invalid_argument (the sum rule has no work to do there).
MultipletEnergies multiplet_energies(double Z, const std::string& family,
                                     const GridSpec& spec, Mode mode,
                                     const ScfOptions& options = {});

// Energy report for the state a label names. For determinant states these
// are the SCF components verbatim. For open-shell singlets every component
// is the diagonal-sum-rule combination 2 * (M_S=0 average) - (triplet),
// which is exact for the one-body pieces and inherits the ensemble
// treatment of the two-electron terms; iterations then counts both runs.
struct TermSolution {
  double E_total = 0.0;
  double T = 0.0;
  double V_en = 0.0;
  double E_H = 0.0;
  double E_x = 0.0;
  double E_c = 0.0;
  double V_ee = 0.0;
  double eigenvalue_sum = 0.0;
  int iterations = 0;
  SCFResult state; // the ensemble state actually solved (ms0 for singlets)
};

TermSolution solve_term(double Z, const std::string& label,
                        const GridSpec& spec, Mode mode,
                        const ScfOptions& options = {});

} // namespace boxatom
