#pragma once
// Every ingredient of the effective potential: spin-resolved densities with
// their derivatives, the Hartree potential from cumulative quadrature, the
// work-function exchange field/potential/energy built from the Fermi hole of
// the occupied determinant(s), and Wigner / Lee-Yang-Parr correlation with
// exact discrete functional derivatives.

#include "core/angular.hpp"
#include "core/config.hpp"
#include "core/eigensolver.hpp"
#include "core/grid.hpp"

#include <Eigen/Dense>

#include <vector>

namespace boxatom {

// Spherically averaged density and its radial derivatives on the full grid.
// Values are stored unclamped (exact zero at the wall); the correlation
// functionals clamp at kDensityFloor before fractional powers.
struct DensityField {
  Eigen::VectorXd rho, rho_up, rho_down;    // bohr^-3
  Eigen::VectorXd grad, grad_up, grad_down; // d(rho)/dr
  Eigen::VectorXd lap, lap_up, lap_down;    // rho'' + 2 rho'/r
  double n_electrons = 0.0;
};

inline constexpr double kDensityFloor = 1e-30;

// Zero-padded full-grid embedding of interior-sampled u(r) values.
Eigen::VectorXd embed_full(const Eigen::VectorXd& u_interior,
                           const RadialGrid& grid);

// Recompute every derivative and total member from rho_up / rho_down using
// the grid's differentiation matrices (center Laplacian entry = 3 rho''(0)).
// Lets synthesized densities share the exact operators build_density uses.
void refresh_derivatives(DensityField& density, const RadialGrid& grid);

// Density from occupied orbitals; occupancies ride in Orbital. If expected_n
// >= 0, a mismatch with the summed occupancy raises std::invalid_argument.
// The center value uses the l=0 slope limit rho(0) = sum occ u'(0)^2 / 4pi;
// the center Laplacian entry stores the smooth-part convention 3 rho''(0).
DensityField build_density(const std::vector<Orbital>& orbitals,
                           const RadialGrid& grid, double expected_n = -1.0);

// v_H(r) = (1/r) int_0^r rho 4pi s^2 ds + int_r^rc rho 4pi s ds, full grid.
Eigen::VectorXd hartree_potential(const DensityField& density,
                                  const RadialGrid& grid);

// Multipole screening of a shell-pair product f = u_a u_b (full grid):
// Y_k[f](r) = r^{-k-1} int_0^r f s^k ds + r^k int_r^rc f s^{-k-1} ds.
// Requires f ~ r^{k+2} near the origin (triangle rule), which keeps every
// integrand finite there.
Eigen::VectorXd multipole_screening(const RadialGrid& grid,
                                    const Eigen::VectorXd& f, int k);

// int f(r) Y_k[h](r) dr: the radial factor of a two-electron integral.
// Symmetric in f and h.
double coulomb_pair_integral(const RadialGrid& grid, const Eigen::VectorXd& f,
                             const Eigen::VectorXd& h, int k);

// Radial Fermi-hole field for one spin channel (full grid). The center value
// vanishes by symmetry; the wall value is the ratio of slopes (both numerator
// and denominator vanish quadratically there). Throws std::domain_error if
// the spin density vanishes at an interior node, std::invalid_argument if
// orbitals and shells disagree.
Eigen::VectorXd exchange_field(const Configuration& config,
                               const std::vector<Orbital>& orbitals,
                               const RadialGrid& grid,
                               const CouplingTable& coupling, Spin spin);

// Work integral of the field from the wall inward, anchored by the analytic
// exterior value v_x(r_c) = -1/r_c.
Eigen::VectorXd exchange_potential(const Eigen::VectorXd& field,
                                   const RadialGrid& grid);

// Two-electron energy bookkeeping over the determinant ensemble:
// E_ee decomposed against the classical Hartree energy, E_x = E_ee - E_H.
struct TwoElectronBreakdown {
  double E_H = 0.0;  // (1/2) iint rho rho / |r-r'|
  double E_ee = 0.0; // ensemble expectation of the pair interaction
  double E_x = 0.0;  // E_ee - E_H
};
TwoElectronBreakdown two_electron_breakdown(const Configuration& config,
                                            const std::vector<Orbital>& orbitals,
                                            const RadialGrid& grid,
                                            const CouplingTable& coupling);

double exchange_energy(const Configuration& config,
                       const std::vector<Orbital>& orbitals,
                       const RadialGrid& grid, const CouplingTable& coupling);

// Correlation energy and the potentials it induces on each spin channel.
struct Correlation {
  double E_c = 0.0;
  Eigen::VectorXd v_up, v_down; // full grid
};

// Local Wigner parametrization e_c = -rho / (a_W + b_W rho^{-1/3}).
Correlation wigner_correlation(const DensityField& density,
                               const RadialGrid& grid);

// Spin-resolved Lee-Yang-Parr functional (gradient- and Laplacian-dependent);
// reduces exactly to the closed-shell form for paired densities. The
// potentials are the exact discrete adjoints of the quadrature energy.
Correlation lyp_correlation(const DensityField& density, const RadialGrid& grid);

// Same functional and energy, but the potentials are the Euler-Lagrange
// (integration-by-parts) form of the derivative: identical to the variational
// form wherever the node carries quadrature measure, yet bounded through the
// measure-degenerate layer next to the origin. This is the form fed back
// through the eigensolver inside the self-consistent cycle.
Correlation lyp_correlation_smooth(const DensityField& density,
                                   const RadialGrid& grid);

// All potential terms on the full grid. v_en[0] is -inf (nuclear singularity
// sits on the excluded boundary node); consumers use interior nodes.
struct PotentialSet {
  Eigen::VectorXd v_en;
  Eigen::VectorXd v_H;
  Eigen::VectorXd v_x_up, v_x_down;
  Eigen::VectorXd v_c_up, v_c_down;

  // Interior-node sum v_en + v_H + v_x + v_c for one spin (no centrifugal).
  Eigen::VectorXd v_scf(Spin spin) const;
  // v_scf plus the centrifugal term l(l+1)/2r^2, interior nodes.
  Eigen::VectorXd v_eff(Spin spin, int l, const RadialGrid& grid) const;
};

// Assemble the potential set for the current orbitals. Spin channels with no
// occupied shells get zero exchange/correlation entries (they host no states).
PotentialSet build_potentials(const Configuration& config,
                              const std::vector<Orbital>& orbitals,
                              const DensityField& density,
                              const RadialGrid& grid,
                              const CouplingTable& coupling, Mode mode);

} // namespace boxatom
