#pragma once
// Radial eigenproblem per (l, spin) channel: dense symmetric diagonalization
// of the kinetic matrix plus the local effective potential, Dirichlet walls.

#include "core/grid.hpp"

#include <Eigen/Dense>

#include <vector>

namespace boxatom {

enum class Spin { up, down };

inline const char* to_string(Spin s) { return s == Spin::up ? "up" : "down"; }

// One occupied shell of the self-consistent solution. u_j holds u(r) = r R(r)
// at the interior collocation nodes; the wall values vanish by construction.
struct Orbital {
  int n = 1;              // principal quantum number
  int l = 0;              // angular momentum
  Spin spin = Spin::up;
  double occupancy = 0.0; // electrons carried by this shell and spin
  double eps = 0.0;       // orbital energy, hartree
  Eigen::VectorXd u;      // interior values of u(r)
};

struct ChannelState {
  double eps;
  Eigen::VectorXd u; // interior values, quadrature-normalized, u'(0) > 0
};

// Lowest k_states eigenpairs of T + diag(v_eff + l(l+1)/2r^2), ascending.
// v_eff may be sampled on the interior nodes or on the full grid (the wall
// values are then ignored). Eigenvectors are returned as u(r) values with
// quadrature norm 1 and a positive first lobe.
std::vector<ChannelState> solve_channel(const Eigen::VectorXd& v_eff,
                                        const RadialGrid& grid, int l,
                                        int k_states);

} // namespace boxatom
