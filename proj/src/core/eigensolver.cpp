#include "core/eigensolver.hpp"

#include "core/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <string>

namespace boxatom {

std::vector<ChannelState> solve_channel(const Eigen::VectorXd& v_eff,
                                        const RadialGrid& grid, int l,
                                        int k_states) {
  const int n = grid.n_interior();
  if (l < 0) throw std::invalid_argument("solve_channel: l must be >= 0");
  if (k_states < 1 || k_states > n)
    throw std::invalid_argument("solve_channel: k_states outside [1, n_r]");

  Eigen::VectorXd v;
  if (v_eff.size() == n)
    v = v_eff;
  else if (v_eff.size() == grid.n_nodes())
    v = v_eff.segment(1, n);
  else
    throw std::invalid_argument("solve_channel: potential has wrong length");
  if (!v.allFinite())
    throw std::invalid_argument("solve_channel: potential not finite at an interior node");

  Eigen::MatrixXd H = grid.t_kin();
  for (int i = 0; i < n; ++i) {
    const double r = grid.r()[i + 1];
    H(i, i) += v[i] + 0.5 * l * (l + 1) / (r * r);
  }

  const double asym = (H - H.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * H.cwiseAbs().maxCoeff())
    throw InternalConsistencyError(
        "solve_channel: Hamiltonian asymmetry " + std::to_string(asym) +
        " exceeds tolerance");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("solve_channel: dense eigensolver failed to converge");

  // Undo the sqrt(w) similarity scaling so that sum_i w_i u_i^2 = 1.
  const Eigen::VectorXd inv_sqrt_w =
      grid.w().segment(1, n).cwiseSqrt().cwiseInverse();

  std::vector<ChannelState> out;
  out.reserve(static_cast<size_t>(k_states));
  for (int k = 0; k < k_states; ++k) {
    ChannelState st;
    st.eps = es.eigenvalues()[k];
    st.u = es.eigenvectors().col(k).cwiseProduct(inv_sqrt_w);
    for (int i = 0; i < n; ++i) {
      if (st.u[i] != 0.0) {
        if (st.u[i] < 0.0) st.u = -st.u;
        break;
      }
    }
    out.push_back(std::move(st));
  }
  return out;
}

} // namespace boxatom
