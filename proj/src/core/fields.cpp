#include "core/fields.hpp"

#include "core/errors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace boxatom {
namespace {

constexpr double kFourPi = 4.0 * M_PI;

// Correlation guards: below this total density a point contributes nothing.
constexpr double kCorrelationCutoff = 1e-12;

// Bound on the correlation potential handed to the self-consistent cycle.
// Two narrow features of the gradient-corrected potential exceed it: the
// divergence -2·g(0)/r at the nuclear cusp (any gradient functional does this
// where the density slope is finite at r = 0), and, under hard confinement, a
// spike one or two mesh cells wide where rho^{-5/3}·exp(-c·rho^{-1/3}) peaks
// near rho ~ (c/5)^3 ~ 1e-4.  Neither feature can hold a state at its width
// (depth·width² ≪ 1) so clamping shifts the total energy only at second
// order, while unclamped both regions destabilize the iteration.  Physical
// correlation potentials outside those features stay below ~0.2.
constexpr double kCorrelationPotentialBound = 2.0;

void check_orbitals_match_shells(const Configuration& config,
                                 const std::vector<Orbital>& orbitals,
                                 const RadialGrid& grid) {
  if (orbitals.size() != config.shells.size())
    throw std::invalid_argument("fields: orbital list does not match shell list");
  for (size_t s = 0; s < orbitals.size(); ++s) {
    const auto& sh = config.shells[s];
    const auto& orb = orbitals[s];
    if (orb.n != sh.n || orb.l != sh.l || orb.spin != sh.spin)
      throw std::invalid_argument("fields: orbital " + std::to_string(s) +
                                  " does not match its shell");
    if (orb.u.size() != grid.n_interior())
      throw std::invalid_argument("fields: orbital amplitudes have wrong length");
  }
}

// Same-shell exchange weight for multipole k: the diagonal m-sum scaled by
// the mean occupation plus the off-diagonal part scaled by pair statistics.
double same_shell_weight(const Configuration& config, size_t s,
                         const CouplingTable::Entry& e) {
  const auto& sh = config.shells[s];
  const double xi = config.mean_occ(s) / (2.0 * sh.l + 1.0);
  double weight = xi * e.same_diag;
  if (sh.l > 0) {
    const double zeta =
        config.pair_occ_same(s) / ((2.0 * sh.l + 1.0) * (2.0 * sh.l));
    weight += zeta * (e.same_all - e.same_diag);
  }
  return weight;
}

} // namespace

Eigen::VectorXd embed_full(const Eigen::VectorXd& u_interior,
                           const RadialGrid& grid) {
  if (u_interior.size() != grid.n_interior())
    throw std::invalid_argument("embed_full: wrong interior length");
  Eigen::VectorXd full = Eigen::VectorXd::Zero(grid.n_nodes());
  full.segment(1, grid.n_interior()) = u_interior;
  return full;
}

void refresh_derivatives(DensityField& d, const RadialGrid& grid) {
  const int M = grid.n_nodes();
  const auto derive = [&](const Eigen::VectorXd& rho, Eigen::VectorXd& grad,
                          Eigen::VectorXd& lap) {
    grad = grid.d1r() * rho;
    const Eigen::VectorXd d2 = grid.d2r() * rho;
    lap.resize(M);
    lap[0] = 3.0 * d2[0]; // smooth-limit convention at the center
    for (int i = 1; i < M; ++i) lap[i] = d2[i] + 2.0 * grad[i] / grid.r()[i];
  };
  derive(d.rho_up, d.grad_up, d.lap_up);
  derive(d.rho_down, d.grad_down, d.lap_down);
  d.rho = d.rho_up + d.rho_down;
  d.grad = d.grad_up + d.grad_down;
  d.lap = d.lap_up + d.lap_down;
}

DensityField build_density(const std::vector<Orbital>& orbitals,
                           const RadialGrid& grid, double expected_n) {
  const int M = grid.n_nodes();
  DensityField d;
  d.rho_up = Eigen::VectorXd::Zero(M);
  d.rho_down = Eigen::VectorXd::Zero(M);
  double total_occ = 0.0;
  for (const auto& orb : orbitals) {
    if (orb.u.size() != grid.n_interior())
      throw std::invalid_argument("build_density: orbital amplitudes have wrong length");
    if (!(orb.occupancy > 0.0))
      throw std::invalid_argument("build_density: non-positive occupancy");
    total_occ += orb.occupancy;
    Eigen::VectorXd& rho = orb.spin == Spin::up ? d.rho_up : d.rho_down;
    const Eigen::VectorXd u_full = embed_full(orb.u, grid);
    for (int i = 1; i < M - 1; ++i) {
      const double r = grid.r()[i];
      rho[i] += orb.occupancy * u_full[i] * u_full[i] / (kFourPi * r * r);
    }
    if (orb.l == 0) {
      const double slope = grid.d1r().row(0).dot(u_full);
      rho[0] += orb.occupancy * slope * slope / kFourPi;
    }
  }
  d.n_electrons = total_occ;
  if (expected_n >= 0.0 && std::abs(total_occ - expected_n) > 1e-8)
    throw std::invalid_argument("build_density: occupancies sum to " +
                                std::to_string(total_occ) + ", expected " +
                                std::to_string(expected_n));
  refresh_derivatives(d, grid);

  const Eigen::VectorXd shell_weight =
      grid.w().cwiseProduct(grid.r().cwiseProduct(grid.r())) * kFourPi;
  const double integral = shell_weight.dot(d.rho);
  if (std::abs(integral - total_occ) > 1e-8 * std::max(1.0, total_occ))
    throw InternalConsistencyError("build_density: density integrates to " +
                                   std::to_string(integral) + " instead of " +
                                   std::to_string(total_occ));
  return d;
}

Eigen::VectorXd hartree_potential(const DensityField& density,
                                  const RadialGrid& grid) {
  const int M = grid.n_nodes();
  const Eigen::VectorXd charge =
      kFourPi * density.rho.cwiseProduct(grid.r().cwiseProduct(grid.r()));
  const Eigen::VectorXd ramp = kFourPi * density.rho.cwiseProduct(grid.r());
  const Eigen::VectorXd inner = grid.cum_low() * charge;
  const Eigen::VectorXd outer = grid.cum_high() * ramp;
  Eigen::VectorXd v(M);
  v[0] = outer[0]; // the enclosed-charge term vanishes as r^2 at the center
  for (int i = 1; i < M; ++i) v[i] = inner[i] / grid.r()[i] + outer[i];
  return v;
}

Eigen::VectorXd multipole_screening(const RadialGrid& grid,
                                    const Eigen::VectorXd& f, int k) {
  const int M = grid.n_nodes();
  if (f.size() != M)
    throw std::invalid_argument("multipole_screening: sample vector has wrong length");
  if (k < 0) throw std::invalid_argument("multipole_screening: negative order");
  Eigen::VectorXd rise(M), fall(M);
  rise[0] = 0.0;
  fall[0] = 0.0; // shell-pair products vanish fast enough at the center
  for (int i = 1; i < M; ++i) {
    const double r = grid.r()[i];
    rise[i] = f[i] * std::pow(r, k);
    fall[i] = f[i] * std::pow(r, -k - 1);
  }
  const Eigen::VectorXd inner = grid.cum_low() * rise;
  const Eigen::VectorXd outer = grid.cum_high() * fall;
  Eigen::VectorXd y(M);
  y[0] = (k == 0) ? outer[0] : 0.0;
  for (int i = 1; i < M; ++i) {
    const double r = grid.r()[i];
    y[i] = std::pow(r, -k - 1) * inner[i] + std::pow(r, k) * outer[i];
  }
  return y;
}

double coulomb_pair_integral(const RadialGrid& grid, const Eigen::VectorXd& f,
                             const Eigen::VectorXd& h, int k) {
  return grid.w().dot(f.cwiseProduct(multipole_screening(grid, h, k)));
}

Eigen::VectorXd exchange_field(const Configuration& config,
                               const std::vector<Orbital>& orbitals,
                               const RadialGrid& grid,
                               const CouplingTable& coupling, Spin spin) {
  check_orbitals_match_shells(config, orbitals, grid);
  const int M = grid.n_nodes();

  std::vector<size_t> members;
  for (size_t s = 0; s < config.shells.size(); ++s)
    if (config.shells[s].spin == spin && config.shells[s].occupancy > 0.0)
      members.push_back(s);
  if (members.empty()) return Eigen::VectorXd::Zero(M);

  std::vector<Eigen::VectorXd> u_full;
  std::vector<double> wall_slope;
  u_full.reserve(members.size());
  for (size_t s : members) {
    u_full.push_back(embed_full(orbitals[s].u, grid));
    wall_slope.push_back(grid.d1r().row(M - 1).dot(u_full.back()));
  }

  Eigen::VectorXd denom = Eigen::VectorXd::Zero(M);
  double denom_wall = 0.0;
  for (size_t a = 0; a < members.size(); ++a) {
    const double occ = config.shells[members[a]].occupancy;
    denom += occ * u_full[a].cwiseProduct(u_full[a]);
    denom_wall += occ * wall_slope[a] * wall_slope[a];
  }

  Eigen::VectorXd numer = Eigen::VectorXd::Zero(M);
  double numer_wall = 0.0;
  for (size_t a = 0; a < members.size(); ++a) {
    for (size_t b = a; b < members.size(); ++b) {
      const size_t sa = members[a];
      const size_t sb = members[b];
      const int la = config.shells[sa].l;
      const int lb = config.shells[sb].l;
      const Eigen::VectorXd f = u_full[a].cwiseProduct(u_full[b]);

      Eigen::VectorXd phi_weighted = Eigen::VectorXd::Zero(M);
      for (int k = std::abs(la - lb); k <= la + lb; ++k) {
        if ((la + lb + k) % 2 == 1) continue; // parity-forbidden multipole
        const auto& entry = coupling.at(la, k, lb);
        const double A = (a == b)
                             ? same_shell_weight(config, sa, entry)
                             : config.pair_occ(sa, sb) * entry.pair_exchange;
        if (A == 0.0) continue;
        Eigen::VectorXd rise(M), fall(M);
        rise[0] = 0.0;
        fall[0] = 0.0;
        for (int i = 1; i < M; ++i) {
          const double r = grid.r()[i];
          rise[i] = f[i] * std::pow(r, k);
          fall[i] = f[i] * std::pow(r, -k - 1);
        }
        const Eigen::VectorXd inner = grid.cum_low() * rise;
        const Eigen::VectorXd outer = grid.cum_high() * fall;
        for (int i = 1; i < M; ++i) {
          const double r = grid.r()[i];
          phi_weighted[i] += A * (k * std::pow(r, k - 1) * outer[i] -
                                  (k + 1) * std::pow(r, -k - 2) * inner[i]);
        }
      }
      const double mult = (a == b) ? 1.0 : 2.0;
      numer += mult * f.cwiseProduct(phi_weighted);
      numer_wall += mult * wall_slope[a] * wall_slope[b] * phi_weighted[M - 1];
    }
  }

  Eigen::VectorXd field(M);
  field[0] = 0.0; // vanishes at the center by symmetry
  for (int i = 1; i < M - 1; ++i) {
    if (denom[i] < 1e-280)
      throw std::domain_error(
          "exchange_field: spin density vanishes at interior radius r=" +
          std::to_string(grid.r()[i]));
    field[i] = numer[i] / denom[i];
  }
  // Wall node: numerator and denominator vanish quadratically; the limit is
  // the ratio of their second derivatives, built from the wall slopes.
  field[M - 1] = numer_wall / denom_wall;
  return field;
}

Eigen::VectorXd exchange_potential(const Eigen::VectorXd& field,
                                   const RadialGrid& grid) {
  if (field.size() != grid.n_nodes())
    throw std::invalid_argument("exchange_potential: field has wrong length");
  Eigen::VectorXd v = grid.cum_high() * field;
  v.array() -= 1.0 / grid.r_c();
  return v;
}

TwoElectronBreakdown two_electron_breakdown(const Configuration& config,
                                            const std::vector<Orbital>& orbitals,
                                            const RadialGrid& grid,
                                            const CouplingTable& coupling) {
  check_orbitals_match_shells(config, orbitals, grid);
  const size_t S = config.shells.size();
  std::vector<Eigen::VectorXd> u_full(S), self_product(S);
  for (size_t s = 0; s < S; ++s) {
    u_full[s] = embed_full(orbitals[s].u, grid);
    self_product[s] = u_full[s].cwiseProduct(u_full[s]);
  }

  // Monopole Coulomb integrals J(s,t) over every unordered shell pair.
  Eigen::MatrixXd J(S, S);
  for (size_t s = 0; s < S; ++s) {
    const Eigen::VectorXd y = multipole_screening(grid, self_product[s], 0);
    for (size_t t = 0; t <= s; ++t) {
      J(s, t) = grid.w().dot(self_product[t].cwiseProduct(y));
      J(t, s) = J(s, t);
    }
  }

  TwoElectronBreakdown out;
  for (size_t s = 0; s < S; ++s)
    for (size_t t = 0; t < S; ++t)
      out.E_H += 0.5 * config.shells[s].occupancy * config.shells[t].occupancy *
                 J(s, t);

  for (size_t s = 0; s < S; ++s) {
    for (size_t t = 0; t < s; ++t) {
      const double nn = config.pair_occ(s, t);
      if (nn == 0.0) continue;
      out.E_ee += nn * J(s, t);
      if (config.shells[s].spin != config.shells[t].spin) continue;
      const int ls = config.shells[s].l;
      const int lt = config.shells[t].l;
      const Eigen::VectorXd cross = u_full[s].cwiseProduct(u_full[t]);
      for (int k = std::abs(ls - lt); k <= ls + lt; ++k) {
        if ((ls + lt + k) % 2 == 1) continue;
        const double kappa = coupling.at(ls, k, lt).pair_exchange;
        if (kappa == 0.0) continue;
        out.E_ee -= nn * kappa * coulomb_pair_integral(grid, cross, cross, k);
      }
    }
    // Within one shell-spin: the m-averaged pair energy (direct minus
    // exchange) collapses to J - (1/2l) sum_k C^2(l k l;000) F^k.
    const double same = config.pair_occ_same(s);
    if (same > 0.0) {
      const int l = config.shells[s].l;
      double pair_energy = J(s, s);
      for (int k = 2; k <= 2 * l; k += 2)
        pair_energy -= coupling.at(l, k, l).c2_000 / (2.0 * l) *
                       coulomb_pair_integral(grid, self_product[s],
                                             self_product[s], k);
      out.E_ee += 0.5 * same * pair_energy;
    }
  }
  out.E_x = out.E_ee - out.E_H;
  return out;
}

double exchange_energy(const Configuration& config,
                       const std::vector<Orbital>& orbitals,
                       const RadialGrid& grid, const CouplingTable& coupling) {
  return two_electron_breakdown(config, orbitals, grid, coupling).E_x;
}

Correlation wigner_correlation(const DensityField& density,
                               const RadialGrid& grid) {
  constexpr double a_W = 9.81;
  constexpr double b_W = 21.437;
  const int M = grid.n_nodes();
  Correlation out;
  out.v_up.resize(M);
  out.E_c = 0.0;
  for (int i = 0; i < M; ++i) {
    const double rho = std::max(density.rho[i], kDensityFloor);
    const double x = std::pow(rho, -1.0 / 3.0);
    const double den = a_W + b_W * x;
    const double r = grid.r()[i];
    out.E_c -= grid.w()[i] * kFourPi * r * r * rho / den;
    out.v_up[i] = -(a_W + (4.0 / 3.0) * b_W * x) / (den * den);
  }
  out.v_down = out.v_up;
  return out;
}

namespace {

// Lee-Yang-Parr constants (original parametrization).
constexpr double kLypA = 0.04918;
constexpr double kLypB = 0.132;
constexpr double kLypC = 0.2533;
constexpr double kLypD = 0.349;
const double kCF = 0.3 * std::pow(3.0 * M_PI * M_PI, 2.0 / 3.0);
const double kCF2 = std::pow(2.0, 2.0 / 3.0) * kCF;

// Energy density and its partial derivatives with respect to the alpha
// channel's density, gradient, and Laplacian. The functional is symmetric
// under swapping the channels, which supplies the beta partials.
struct LypAlpha {
  double f = 0.0;
  double f_p = 0.0;  // d f / d rho_alpha
  double f_gp = 0.0; // d f / d (d rho_alpha / dr)
  double f_Lp = 0.0; // d f / d (lap rho_alpha)
};

LypAlpha lyp_alpha(double p, double q, double gp, double gq, double Lp,
                   double Lq) {
  LypAlpha out;
  const double rho = p + q;
  if (rho < kCorrelationCutoff) return out;

  const double x = std::pow(rho, -1.0 / 3.0);
  const double den = 1.0 + kLypD * x;
  const double expo = std::exp(-kLypC * x);
  const double G = gp + gq;
  const double L = Lp + Lq;
  const double tW = (G * G / rho - L) / 8.0;
  const bool live_p = p > kCorrelationCutoff;
  const bool live_q = q > kCorrelationCutoff;
  const double tWa = live_p ? (gp * gp / p - Lp) / 8.0 : 0.0;
  const double tWb = live_q ? (gq * gq / q - Lq) / 8.0 : 0.0;

  const double S = kCF2 * (std::pow(p, 8.0 / 3.0) + std::pow(q, 8.0 / 3.0)) -
                   rho * tW + (p * tWa + q * tWb) / 9.0 +
                   (p * Lp + q * Lq) / 18.0;
  const double rho_m53 = std::pow(rho, -5.0 / 3.0);
  const double B = rho + 2.0 * kLypB * rho_m53 * S * expo;
  const double gamma = 4.0 * p * q / (rho * rho);
  out.f = -kLypA * gamma * B / den;

  const double dx = -std::pow(rho, -4.0 / 3.0) / 3.0; // dx/d rho_alpha
  const double den_p = kLypD * dx;
  const double expo_p = -kLypC * dx * expo;
  const double gamma_p = 4.0 * q * (rho - 2.0 * p) / (rho * rho * rho);
  const double tW_p = -G * G / (8.0 * rho * rho);
  const double tWa_p = live_p ? -gp * gp / (8.0 * p * p) : 0.0;
  const double S_p = kCF2 * (8.0 / 3.0) * std::pow(p, 5.0 / 3.0) - tW -
                     rho * tW_p + (tWa + p * tWa_p) / 9.0 + Lp / 18.0;
  const double rho_m53_p = (-5.0 / 3.0) * std::pow(rho, -8.0 / 3.0);
  const double B_p =
      1.0 + 2.0 * kLypB * expo * (rho_m53_p * S + rho_m53 * S_p) +
      2.0 * kLypB * rho_m53 * S * expo_p;
  out.f_p = -kLypA * (gamma_p * B / den + gamma * B_p / den -
                      gamma * B * den_p / (den * den));

  const double common = -kLypA * gamma / den * 2.0 * kLypB * rho_m53 * expo;
  const double S_gp = -G / 4.0 + gp / 36.0;
  const double S_Lp = rho / 8.0 + p / 24.0;
  out.f_gp = common * S_gp;
  out.f_Lp = common * S_Lp;
  return out;
}

} // namespace

namespace {

// Per-node energy density and partial derivatives of the spin-resolved
// functional over the full grid.
struct LypPointwise {
  Eigen::VectorXd f, fp, fq, fgp, fgq, fLp, fLq;
};

LypPointwise lyp_pointwise(const DensityField& density) {
  const int M = static_cast<int>(density.rho.size());
  LypPointwise P;
  P.f.resize(M);
  P.fp.resize(M);
  P.fq.resize(M);
  P.fgp.resize(M);
  P.fgq.resize(M);
  P.fLp.resize(M);
  P.fLq.resize(M);
  for (int i = 0; i < M; ++i) {
    const double p = std::max(density.rho_up[i], kDensityFloor);
    const double q = std::max(density.rho_down[i], kDensityFloor);
    const LypAlpha A = lyp_alpha(p, q, density.grad_up[i], density.grad_down[i],
                                 density.lap_up[i], density.lap_down[i]);
    const LypAlpha B = lyp_alpha(q, p, density.grad_down[i], density.grad_up[i],
                                 density.lap_down[i], density.lap_up[i]);
    P.f[i] = A.f;
    P.fp[i] = A.f_p;
    P.fgp[i] = A.f_gp;
    P.fLp[i] = A.f_Lp;
    P.fq[i] = B.f_p;
    P.fgq[i] = B.f_gp;
    P.fLq[i] = B.f_Lp;
  }
  return P;
}

// Radial Laplacian operator D2 + (2/r) D1 with the center row replaced by
// the regular limit 3 rho''(0).
Eigen::MatrixXd radial_lap_op(const RadialGrid& grid) {
  const int M = grid.n_nodes();
  Eigen::MatrixXd lap_op = grid.d2r();
  for (int i = 1; i < M; ++i)
    lap_op.row(i) += (2.0 / grid.r()[i]) * grid.d1r().row(i);
  lap_op.row(0) = 3.0 * grid.d2r().row(0);
  return lap_op;
}

} // namespace

Correlation lyp_correlation(const DensityField& density,
                            const RadialGrid& grid) {
  const int M = grid.n_nodes();
  const LypPointwise P = lyp_pointwise(density);

  const Eigen::VectorXd omega =
      kFourPi * grid.w().cwiseProduct(grid.r().cwiseProduct(grid.r()));

  Correlation out;
  out.E_c = omega.dot(P.f);

  // Discrete adjoint of the quadrature energy: gradient terms flow back
  // through the first-derivative matrix, Laplacian terms through
  // D2 + (2/r) D1 (whose center row never contributes: omega_0 = 0).
  const Eigen::MatrixXd lap_op = radial_lap_op(grid);

  const Eigen::VectorXd back_up =
      grid.d1r().transpose() * omega.cwiseProduct(P.fgp) +
      lap_op.transpose() * omega.cwiseProduct(P.fLp);
  const Eigen::VectorXd back_down =
      grid.d1r().transpose() * omega.cwiseProduct(P.fgq) +
      lap_op.transpose() * omega.cwiseProduct(P.fLq);

  out.v_up.resize(M);
  out.v_down.resize(M);
  out.v_up[0] = P.fp[0];
  out.v_down[0] = P.fq[0];
  for (int i = 1; i < M; ++i) {
    out.v_up[i] = P.fp[i] + back_up[i] / omega[i];
    out.v_down[i] = P.fq[i] + back_down[i] / omega[i];
  }
  return out;
}

Correlation lyp_correlation_smooth(const DensityField& density,
                                   const RadialGrid& grid) {
  const int M = grid.n_nodes();
  const LypPointwise P = lyp_pointwise(density);

  const Eigen::VectorXd omega =
      kFourPi * grid.w().cwiseProduct(grid.r().cwiseProduct(grid.r()));

  Correlation out;
  out.E_c = omega.dot(P.f);

  // Euler-Lagrange form of the functional derivative:
  //   v = df/drho - (1/r^2) d/dr (r^2 df/drho') + lap(df/dlap(rho)),
  // evaluated with forward differentiation matrices on the smooth partial
  // fields. It agrees with the variational form of lyp_correlation wherever
  // the node carries quadrature measure, but stays bounded through the
  // measure-degenerate layer next to the origin, where the variational form
  // divides an adjoint sum by a vanishing weight.
  const Eigen::MatrixXd lap_op = radial_lap_op(grid);
  const Eigen::VectorXd div_up = grid.d1r() * P.fgp;
  const Eigen::VectorXd div_down = grid.d1r() * P.fgq;
  const Eigen::VectorXd lap_up = lap_op * P.fLp;
  const Eigen::VectorXd lap_down = lap_op * P.fLq;

  // Where the density is sub-physical the exponential damping factor has
  // already driven the gradient-corrected energy density to nothing, yet the
  // differentiation matrices still sample the steep flank of the partial
  // fields, and against a hard wall that evaluation is pure interpolation
  // noise that feeds back through the eigensolver as a growing sawtooth.  The
  // continuum limit of the derivative terms at vanishing density is zero, so
  // attenuate them smoothly below kDerivativeFloor while keeping the bounded
  // local term, which tends to a finite constant.  The quartic switch turns
  // off within a decade: the logarithmic sensitivity of the partial fields,
  // -5/3 + (c/3)·rho^{-1/3}, is what amplifies node-scale noise, and it grows
  // past the feedback threshold just below the floor while staying mild one
  // decade above it.
  constexpr double kDerivativeFloor = 3e-5;
  out.v_up.resize(M);
  out.v_down.resize(M);
  out.v_up[0] = P.fp[0];
  out.v_down[0] = P.fq[0];
  for (int i = 1; i < M; ++i) {
    const double r = grid.r()[i];
    const double rho = density.rho[i];
    const double t = rho * rho / (kDerivativeFloor * kDerivativeFloor);
    const double s = t * t / (t * t + 1.0);
    out.v_up[i] =
        P.fp[i] + s * (lap_up[i] - div_up[i] - 2.0 / r * P.fgp[i]);
    out.v_down[i] =
        P.fq[i] + s * (lap_down[i] - div_down[i] - 2.0 / r * P.fgq[i]);
  }
  return out;
}

Eigen::VectorXd PotentialSet::v_scf(Spin spin) const {
  const int n = static_cast<int>(v_en.size()) - 2;
  const Eigen::VectorXd& vx = spin == Spin::up ? v_x_up : v_x_down;
  const Eigen::VectorXd& vc = spin == Spin::up ? v_c_up : v_c_down;
  return v_en.segment(1, n) + v_H.segment(1, n) + vx.segment(1, n) +
         vc.segment(1, n);
}

Eigen::VectorXd PotentialSet::v_eff(Spin spin, int l,
                                    const RadialGrid& grid) const {
  Eigen::VectorXd v = v_scf(spin);
  for (int i = 0; i < v.size(); ++i) {
    const double r = grid.r()[i + 1];
    v[i] += 0.5 * l * (l + 1) / (r * r);
  }
  return v;
}

PotentialSet build_potentials(const Configuration& config,
                              const std::vector<Orbital>& orbitals,
                              const DensityField& density,
                              const RadialGrid& grid,
                              const CouplingTable& coupling, Mode mode) {
  const int M = grid.n_nodes();
  PotentialSet pots;
  pots.v_en.resize(M);
  pots.v_en[0] = -std::numeric_limits<double>::infinity();
  for (int i = 1; i < M; ++i) pots.v_en[i] = -config.Z / grid.r()[i];
  pots.v_H = hartree_potential(density, grid);

  bool occupied[2] = {false, false};
  for (const auto& sh : config.shells)
    occupied[sh.spin == Spin::up ? 0 : 1] = true;
  pots.v_x_up = occupied[0]
                    ? exchange_potential(
                          exchange_field(config, orbitals, grid, coupling, Spin::up),
                          grid)
                    : Eigen::VectorXd::Zero(M);
  pots.v_x_down = occupied[1]
                      ? exchange_potential(exchange_field(config, orbitals, grid,
                                                          coupling, Spin::down),
                                           grid)
                      : Eigen::VectorXd::Zero(M);

  switch (mode) {
    case Mode::x_only:
      pots.v_c_up = Eigen::VectorXd::Zero(M);
      pots.v_c_down = Eigen::VectorXd::Zero(M);
      break;
    case Mode::xc_wigner: {
      const Correlation c = wigner_correlation(density, grid);
      pots.v_c_up = c.v_up;
      pots.v_c_down = c.v_down;
      break;
    }
    case Mode::xc_lyp: {
      // The self-consistent cycle gets the Euler-Lagrange form: feeding the
      // variational form back through the eigensolver is unstable because of
      // its unbounded amplification at measure-degenerate nodes.
      const Correlation c = lyp_correlation_smooth(density, grid);
      const double b = kCorrelationPotentialBound;
      pots.v_c_up = c.v_up.cwiseMax(-b).cwiseMin(b);
      pots.v_c_down = c.v_down.cwiseMax(-b).cwiseMin(b);
      break;
    }
  }
  return pots;
}

} // namespace boxatom
