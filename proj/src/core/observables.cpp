#include "core/observables.hpp"

#include "core/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace boxatom {

double radial_moment(const DensityField& density, int k,
                     const RadialGrid& grid) {
  if (k < -2)
    throw std::invalid_argument(
        "radial_moment: k = " + std::to_string(k) +
        " diverges at the origin; only k >= -2 is integrable");
  if (density.rho.size() != grid.n_nodes())
    throw std::invalid_argument(
        "radial_moment: density and grid sizes disagree");
  // fold the volume element into the power so the origin never sees r^k
  double acc = 0.0;
  for (int i = 0; i < grid.n_nodes(); ++i)
    acc += grid.w()[i] * density.rho[i] * std::pow(grid.r()[i], k + 2);
  return 4.0 * M_PI * acc;
}

MomentSet moment_set(const DensityField& density, const RadialGrid& grid,
                     bool unit_normalized) {
  MomentSet m;
  m.n_electrons = radial_moment(density, 0, grid);
  const double scale = unit_normalized ? 1.0 / m.n_electrons : 1.0;
  m.m_minus2 = scale * radial_moment(density, -2, grid);
  m.m_minus1 = scale * radial_moment(density, -1, grid);
  m.m_1 = scale * radial_moment(density, 1, grid);
  m.m_2 = scale * radial_moment(density, 2, grid);
  m.m_3 = scale * radial_moment(density, 3, grid);
  m.m_4 = scale * radial_moment(density, 4, grid);
  return m;
}

RadialDistribution radial_distribution(const SCFResult& state,
                                       const RadialGrid& grid, int n_samples) {
  if (n_samples < 2)
    throw std::invalid_argument(
        "radial_distribution: need at least two sample points");
  RadialDistribution out;
  const int M = grid.n_nodes();

  out.r_uniform.resize(n_samples);
  for (int s = 0; s < n_samples; ++s)
    out.r_uniform[s] = grid.r_c() * s / (n_samples - 1);

  out.total_nodes = Eigen::VectorXd::Zero(M);
  out.total_uniform = Eigen::VectorXd::Zero(n_samples);
  for (const auto& orb : state.orbitals) {
    const Eigen::VectorXd u = embed_full(orb.u, grid);
    Eigen::VectorXd nodes = u.cwiseProduct(u);
    Eigen::VectorXd uniform(n_samples);
    for (int s = 0; s < n_samples; ++s) {
      const double amp = grid.interpolate(u, out.r_uniform[s]);
      uniform[s] = amp * amp;
    }
    out.total_nodes += orb.occupancy * nodes;
    out.total_uniform += orb.occupancy * uniform;
    out.orbital_nodes.push_back(std::move(nodes));
    out.orbital_uniform.push_back(std::move(uniform));
  }
  return out;
}

std::vector<CorrelationPoint> correlation_scan(const Configuration& config,
                                               const std::vector<double>& radii,
                                               Mode mode, const GridSpec& grid,
                                               const ScfOptions& options) {
  std::vector<CorrelationPoint> table;
  table.reserve(radii.size());
  for (double rc : radii) {
    CorrelationPoint pt;
    pt.r_c = rc;
    GridSpec spec = grid;
    spec.r_c = rc;
    try {
      const SCFResult base = scf_solve(config, spec, Mode::x_only, options);
      pt.E_x_only = base.E_total;
      if (mode == Mode::x_only) {
        pt.E_total = base.E_total;
        pt.iterations = base.iterations;
      } else {
        const SCFResult corr = scf_solve(config, spec, mode, options);
        pt.E_total = corr.E_total;
        pt.E_c = corr.E_c;
        pt.gap = corr.E_total - base.E_total;
        pt.iterations = corr.iterations;
      }
      pt.converged = true;
    } catch (const std::exception& e) {
      pt.converged = false;
      pt.error = e.what();
    }
    table.push_back(std::move(pt));
  }
  return table;
}

} // namespace boxatom
