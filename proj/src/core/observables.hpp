#pragma once
// Post-processing of converged states: density moments against the N-electron
// normalization, radial probability distributions with a uniform resampling
// for plotting, and correlation-energy scans over a ladder of cavity radii.

#include "core/config.hpp"
#include "core/fields.hpp"
#include "core/grid.hpp"
#include "core/scf.hpp"

#include <string>
#include <vector>

namespace boxatom {

// integral of rho r^k 4 pi r^2 dr by grid quadrature. The density carries a
// factor r^2 from the volume element, so every k >= -2 is integrable; k < -2
// is rejected with std::invalid_argument.
double radial_moment(const DensityField& density, int k,
                     const RadialGrid& grid);

struct MomentSet {
  double m_minus2 = 0.0; // <r^-2>
  double m_minus1 = 0.0; // <r^-1>
  double m_1 = 0.0;      // <r>
  double m_2 = 0.0;      // <r^2>
  double m_3 = 0.0;      // <r^3>
  double m_4 = 0.0;      // <r^4>
  double n_electrons = 0.0;
};

// Expectations over the density as integrated (sums to N). Passing
// unit_normalized divides every moment by N for comparisons against
// unit-normalized tabulations.
MomentSet moment_set(const DensityField& density, const RadialGrid& grid,
                     bool unit_normalized = false);

struct RadialDistribution {
  // Per-orbital D_nl = u_nl^2 sampled on the collocation nodes (full grid,
  // zero at both walls), aligned with the state's shell order, plus the
  // occupation-weighted total sum occ * u^2 = 4 pi r^2 rho.
  std::vector<Eigen::VectorXd> orbital_nodes;
  Eigen::VectorXd total_nodes;

  // Uniform resampling on [0, r_c] through the collocation cardinal
  // functions; amplitudes are interpolated and then squared so the
  // distributions stay nonnegative between nodes.
  Eigen::VectorXd r_uniform;
  std::vector<Eigen::VectorXd> orbital_uniform;
  Eigen::VectorXd total_uniform;
};

RadialDistribution radial_distribution(const SCFResult& state,
                                       const RadialGrid& grid,
                                       int n_samples = 1000);

struct CorrelationPoint {
  double r_c = 0.0;
  bool converged = false;
  std::string error;      // failure description when !converged
  double E_total = 0.0;   // total with the requested functional
  double E_x_only = 0.0;  // exchange-only total at the same radius
  double E_c = 0.0;       // correlation energy of the converged state
  double gap = 0.0;       // E_total - E_x_only
  int iterations = 0;
};

// One SCF per radius with the requested functional plus an exchange-only
// companion for the gap column. A point whose SCF fails is flagged and the
// scan continues; nothing throws for per-point failures.
std::vector<CorrelationPoint> correlation_scan(const Configuration& config,
                                               const std::vector<double>& radii,
                                               Mode mode, const GridSpec& grid,
                                               const ScfOptions& options = {});

} // namespace boxatom
