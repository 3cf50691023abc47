#include "core/scf.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace boxatom {
namespace {

// Kinetic expectation value of one orbital, centrifugal part included.
double kinetic_expectation(const Orbital& orb, const RadialGrid& grid) {
  const int n = grid.n_interior();
  const Eigen::VectorXd w = grid.w().segment(1, n);
  const Eigen::VectorXd vt = orb.u.cwiseProduct(w.cwiseSqrt());
  double t = vt.dot(grid.t_kin() * vt);
  if (orb.l > 0) {
    for (int i = 0; i < n; ++i) {
      const double r = grid.r()[i + 1];
      t += 0.5 * orb.l * (orb.l + 1) * w[i] * orb.u[i] * orb.u[i] / (r * r);
    }
  }
  return t;
}

struct EnergyParts {
  double T = 0.0, V_en = 0.0, E_H = 0.0, E_x = 0.0, E_c = 0.0, E_total = 0.0;
};

EnergyParts assemble_energy(const Configuration& config,
                            const std::vector<Orbital>& orbitals,
                            const DensityField& density, const RadialGrid& grid,
                            const CouplingTable& coupling, Mode mode) {
  EnergyParts e;
  const int n = grid.n_interior();
  for (const auto& orb : orbitals) {
    e.T += orb.occupancy * kinetic_expectation(orb, grid);
    double ven = 0.0;
    for (int i = 0; i < n; ++i)
      ven -= grid.w()[i + 1] * orb.u[i] * orb.u[i] * config.Z / grid.r()[i + 1];
    e.V_en += orb.occupancy * ven;
  }
  const TwoElectronBreakdown br =
      two_electron_breakdown(config, orbitals, grid, coupling);
  e.E_H = br.E_H;
  e.E_x = br.E_x;
  switch (mode) {
    case Mode::x_only:
      break;
    case Mode::xc_wigner:
      e.E_c = wigner_correlation(density, grid).E_c;
      break;
    case Mode::xc_lyp:
      e.E_c = lyp_correlation(density, grid).E_c;
      break;
  }
  e.E_total = e.T + e.V_en + e.E_H + e.E_x + e.E_c;
  return e;
}

bool spin_mirror_symmetric(const Configuration& config) {
  std::multiset<std::tuple<int, int, double>> up, down;
  for (const auto& sh : config.shells)
    (sh.spin == Spin::up ? up : down)
        .insert({sh.n, sh.l, sh.occupancy});
  return up == down;
}

} // namespace

SCFResult scf_solve(const Configuration& config, const GridSpec& spec,
                    Mode mode, const ScfOptions& options) {
  config.validate();
  if (!(spec.r_c > 0.05))
    throw std::invalid_argument(
        "scf_solve: confinement radius must exceed 0.05 bohr");
  const RadialGrid grid(spec);
  const int n = grid.n_interior();

  std::vector<int> l_values;
  for (const auto& sh : config.shells) l_values.push_back(sh.l);
  const CouplingTable coupling(l_values);

  // channel table: (spin, l) -> number of states needed
  std::map<std::pair<int, int>, int> channels;
  for (const auto& sh : config.shells) {
    const int spin_idx = sh.spin == Spin::up ? 0 : 1;
    int& k = channels[{spin_idx, sh.l}];
    k = std::max(k, sh.n - sh.l);
  }
  const bool mirror = spin_mirror_symmetric(config);

  std::vector<Orbital> orbitals;
  orbitals.reserve(config.shells.size());
  for (const auto& sh : config.shells)
    orbitals.push_back({sh.n, sh.l, sh.spin, sh.occupancy, 0.0, {}});

  const auto solve_with = [&](const Eigen::VectorXd& v_up,
                              const Eigen::VectorXd& v_down) {
    std::map<std::pair<int, int>, std::vector<ChannelState>> solved;
    for (const auto& [key, k] : channels) {
      if (mirror && key.first == 1) continue; // reuse the spin-up solve
      solved[key] = solve_channel(key.first == 0 ? v_up : v_down, grid,
                                  key.second, k);
    }
    for (auto& orb : orbitals) {
      int spin_idx = orb.spin == Spin::up ? 0 : 1;
      if (mirror) spin_idx = 0;
      const auto& st = solved.at({spin_idx, orb.l})[orb.n - orb.l - 1];
      orb.eps = st.eps;
      orb.u = st.u;
    }
  };

  // hydrogenic starting point
  Eigen::VectorXd v_init(n);
  for (int i = 0; i < n; ++i) v_init[i] = -config.Z / grid.r()[i + 1];
  Eigen::VectorXd v_in_up = v_init, v_in_down = v_init;
  solve_with(v_in_up, v_in_down);

  double beta = options.mixing;
  Eigen::VectorXd v_mix_up, v_mix_down, v_prev_out_up, v_prev_out_down;
  double e_prev = 0.0;
  std::vector<IterationRecord> history;
  int oscillations = 0;
  bool converged = false;
  DensityField density;
  PotentialSet pots;
  EnergyParts parts;
  constexpr double kInf = std::numeric_limits<double>::infinity();

  for (int iter = 1; iter <= options.max_iter; ++iter) {
    density = build_density(orbitals, grid, config.n_electrons());
    pots = build_potentials(config, orbitals, density, grid, coupling, mode);
    const Eigen::VectorXd out_up = pots.v_scf(Spin::up);
    const Eigen::VectorXd out_down = pots.v_scf(Spin::down);
    parts = assemble_energy(config, orbitals, density, grid, coupling, mode);

    const double delta_e = history.empty() ? kInf : parts.E_total - e_prev;
    const double delta_v =
        v_prev_out_up.size() == 0
            ? kInf
            : std::max((out_up - v_prev_out_up).lpNorm<Eigen::Infinity>(),
                       (out_down - v_prev_out_down).lpNorm<Eigen::Infinity>());
    history.push_back({iter, parts.E_total, delta_e, delta_v, beta});

    if (std::abs(delta_e) < options.energy_tol &&
        delta_v < options.potential_tol) {
      converged = true;
      break;
    }

    // adaptive mixing: sign-alternating, non-shrinking energy steps. Steps
    // below the energy tolerance are convergence noise, not oscillation.
    if (history.size() >= 2) {
      const double prev = history[history.size() - 2].delta_E;
      if (std::isfinite(delta_e) && std::isfinite(prev) &&
          std::abs(delta_e) > options.energy_tol &&
          delta_e * prev < 0.0 && std::abs(delta_e) > 0.5 * std::abs(prev))
        ++oscillations;
      else
        oscillations = 0;
      if (oscillations >= 4) {
        if (beta > options.min_mixing + 1e-12) {
          beta = std::max(0.5 * beta, options.min_mixing);
          oscillations = 0;
        } else if (oscillations >= 12) {
          throw ScfNotConverged(
              "scf_solve: energy oscillates at the mixing floor for " +
                  config.term_label +
                  "; retry with a smaller initial mixing weight",
              history);
        }
      }
    }

    e_prev = parts.E_total;
    v_prev_out_up = out_up;
    v_prev_out_down = out_down;
    if (v_mix_up.size() == 0) {
      v_mix_up = out_up;
      v_mix_down = out_down;
    } else {
      v_mix_up = (1.0 - beta) * v_mix_up + beta * out_up;
      v_mix_down = (1.0 - beta) * v_mix_down + beta * out_down;
    }
    v_in_up = v_mix_up;
    v_in_down = v_mix_down;
    solve_with(v_in_up, v_in_down);
  }

  if (!converged) {
    std::ostringstream msg;
    msg << "scf_solve: " << config.term_label << " did not converge within "
        << options.max_iter << " iterations (last |dE|="
        << std::abs(history.back().delta_E)
        << ", |dv|=" << history.back().max_delta_v << ")";
    throw ScfNotConverged(msg.str(), history);
  }

  SCFResult res;
  res.config = config;
  res.mode = mode;
  res.orbitals = orbitals;
  res.density = density;
  res.potentials = pots;
  res.T = parts.T;
  res.V_en = parts.V_en;
  res.E_H = parts.E_H;
  res.E_x = parts.E_x;
  res.E_c = parts.E_c;
  res.V_ee = parts.E_H + parts.E_x + parts.E_c;
  res.E_total = parts.E_total;
  for (const auto& orb : orbitals)
    res.eigenvalue_sum += orb.occupancy * orb.eps;
  res.v_input_up = v_in_up;
  res.v_input_down = v_in_down;
  res.iterations = static_cast<int>(history.size());
  res.history = std::move(history);
  return res;
}

MultipletEnergies multiplet_energies(double Z, const std::string& family,
                                     const GridSpec& spec, Mode mode,
                                     const ScfOptions& options) {
  // parse "1s2s"-style families: two singly occupied shells
  struct Token {
    int n, l;
    long occ;
  };
  std::vector<Token> tokens;
  size_t pos = 0;
  const std::string l_letters = "spdf";
  while (pos < family.size()) {
    size_t digits = pos;
    while (digits < family.size() && std::isdigit(family[digits])) ++digits;
    if (digits == pos || digits >= family.size())
      throw std::invalid_argument("multiplet_energies: malformed family '" +
                                  family + "'");
    const int n = std::stoi(family.substr(pos, digits - pos));
    const size_t lpos = l_letters.find(family[digits]);
    if (lpos == std::string::npos)
      throw std::invalid_argument("multiplet_energies: malformed family '" +
                                  family + "'");
    pos = digits + 1;
    long occ = 1;
    size_t occ_end = pos;
    // digits after the letter are an occupancy only if no letter follows
    while (occ_end < family.size() && std::isdigit(family[occ_end])) ++occ_end;
    if (occ_end > pos && occ_end == family.size()) {
      occ = std::stol(family.substr(pos, occ_end - pos));
      pos = occ_end;
    }
    tokens.push_back({n, static_cast<int>(lpos), occ});
  }
  if (tokens.size() != 2 || tokens[0].occ != 1 || tokens[1].occ != 1 ||
      (tokens[0].n == tokens[1].n && tokens[0].l == tokens[1].l))
    throw std::invalid_argument(
        "multiplet_energies: the diagonal sum rule needs exactly two distinct "
        "singly occupied shells, got '" +
        family + "'");

  const int L = tokens[0].l + tokens[1].l;
  const std::string letters = "SPDFGHI";
  if (L >= static_cast<int>(letters.size()))
    throw std::invalid_argument("multiplet_energies: total L out of range");
  const std::string triplet_label = family + "_3" + letters[L];
  const std::string singlet_label = family + "_1" + letters[L];

  MultipletEnergies out;
  out.triplet_state =
      scf_solve(configuration_from_label(Z, triplet_label), spec, mode, options);
  out.ms0_state =
      scf_solve(configuration_from_label(Z, singlet_label), spec, mode, options);
  out.triplet = {triplet_label, out.triplet_state.E_total};
  out.singlet = {singlet_label,
                 2.0 * out.ms0_state.E_total - out.triplet_state.E_total};
  return out;
}

TermSolution solve_term(double Z, const std::string& label,
                        const GridSpec& spec, Mode mode,
                        const ScfOptions& options) {
  const Configuration config = configuration_from_label(Z, label);
  TermSolution out;
  if (config.determinant_role == DeterminantRole::ms0_average) {
    const std::string family = label.substr(0, label.find_last_of('_'));
    MultipletEnergies m = multiplet_energies(Z, family, spec, mode, options);
    const SCFResult& a = m.ms0_state;
    const SCFResult& b = m.triplet_state;
    out.E_total = 2.0 * a.E_total - b.E_total;
    out.T = 2.0 * a.T - b.T;
    out.V_en = 2.0 * a.V_en - b.V_en;
    out.E_H = 2.0 * a.E_H - b.E_H;
    out.E_x = 2.0 * a.E_x - b.E_x;
    out.E_c = 2.0 * a.E_c - b.E_c;
    out.V_ee = 2.0 * a.V_ee - b.V_ee;
    out.eigenvalue_sum = 2.0 * a.eigenvalue_sum - b.eigenvalue_sum;
    out.iterations = a.iterations + b.iterations;
    out.state = std::move(m.ms0_state);
  } else {
    SCFResult s = scf_solve(config, spec, mode, options);
    out.E_total = s.E_total;
    out.T = s.T;
    out.V_en = s.V_en;
    out.E_H = s.E_H;
    out.E_x = s.E_x;
    out.E_c = s.E_c;
    out.V_ee = s.V_ee;
    out.eigenvalue_sum = s.eigenvalue_sum;
    out.iterations = s.iterations;
    out.state = std::move(s);
  }
  return out;
}

} // namespace boxatom
