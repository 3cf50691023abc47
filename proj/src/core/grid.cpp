#include "core/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace boxatom {
namespace {

// P_N(x) and P_{N-1}(x) by the three-term recurrence.
struct LegendrePair {
  double pn;
  double pnm1;
};

LegendrePair legendre_pair(int N, double x) {
  double p0 = 1.0;
  double p1 = x;
  if (N == 0) return {p0, 0.0};
  for (int k = 2; k <= N; ++k) {
    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, p0};
}

} // namespace

void GridSpec::validate() const {
  if (n_r < 4) throw std::invalid_argument("grid: n_r must be at least 4");
  if (!(L > 0.0)) throw std::invalid_argument("grid: map scale L must be positive");
  if (!(r_c > 0.0) || !std::isfinite(r_c))
    throw std::invalid_argument("grid: cavity radius r_c must be positive and finite");
}

std::vector<double> collocation_points(int N) {
  if (N < 1) throw std::runtime_error("collocation_points: degree must be >= 1");
  std::vector<double> x(static_cast<size_t>(N) + 1);
  x.front() = -1.0;
  x.back() = 1.0;
  // Interior points: roots of P_N'. Newton iteration on
  // g(x) = N (P_{N-1} - x P_N), whose derivative is -N(N+1) P_N by the
  // Legendre equation, seeded from the Chebyshev-Lobatto points.
  for (int j = 1; j < N; ++j) {
    double xj = -std::cos(M_PI * j / N);
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      const LegendrePair p = legendre_pair(N, xj);
      const double step = (p.pnm1 - xj * p.pn) / ((N + 1) * p.pn);
      xj += step;
      if (std::abs(step) < 1e-15) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw std::runtime_error("collocation_points: Newton search failed at index " +
                               std::to_string(j));
    x[j] = xj;
  }
  // Symmetrize: the node set is exactly antisymmetric about x = 0.
  for (int j = 1; j < N - j; ++j) {
    const double a = 0.5 * (x[N - j] - x[j]);
    x[j] = -a;
    x[N - j] = a;
  }
  if (N % 2 == 0) x[N / 2] = 0.0;
  for (int j = 0; j < N; ++j)
    if (!(x[j] < x[j + 1]))
      throw std::runtime_error("collocation_points: nodes not strictly increasing");
  return x;
}

MapPoint map_to_radial(double x, double L, double r_c) {
  const double alpha = 2.0 * L / r_c;
  const double denom = 1.0 - x + alpha;
  return {L * (1.0 + x) / denom, L * (2.0 + alpha) / (denom * denom)};
}

RadialGrid::RadialGrid(const GridSpec& spec) : spec_(spec) {
  spec_.validate();
  N_ = spec_.n_r + 1;
  const int M = N_ + 1; // total node count
  const std::vector<double> xs = collocation_points(N_);

  x_.resize(M);
  r_.resize(M);
  w_.resize(M);
  jac_.resize(M);
  pn_.resize(M);
  for (int j = 0; j < M; ++j) {
    x_[j] = xs[static_cast<size_t>(j)];
    const MapPoint m = map_to_radial(x_[j], spec_.L, spec_.r_c);
    r_[j] = m.r;
    jac_[j] = m.jac;
    pn_[j] = legendre_pair(N_, x_[j]).pn;
    // Gauss-Lobatto weight in x, scaled by the map jacobian for ∫ dr.
    w_[j] = 2.0 / (N_ * (N_ + 1) * pn_[j] * pn_[j]) * jac_[j];
  }
  r_[0] = 0.0;
  r_[M - 1] = spec_.r_c;

  // Collocation derivative in x: D_ij = P_N(x_i) / (P_N(x_j) (x_i - x_j)).
  // Each diagonal entry equals minus its row sum (constants have zero
  // derivative), which is also the most accurate way to compute it.
  d1x_.setZero(M, M);
  for (int i = 0; i < M; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < M; ++j)
      if (i != j) {
        d1x_(i, j) = pn_[i] / (pn_[j] * (x_[i] - x_[j]));
        row_sum += d1x_(i, j);
      }
    d1x_(i, i) = -row_sum;
  }

  d1r_ = jac_.cwiseInverse().asDiagonal() * d1x_;
  d2r_ = d1r_ * d1r_;

  // Weak-form kinetic matrix: ∫ u'(r)^2 dr = Σ_k w_k^x (Du)_k^2 / jac_k^2,
  // restricted to the interior and symmetrized in the scaled amplitudes
  // v = sqrt(w) u so that the eigenproblem stays explicitly Hermitian.
  const int n = spec_.n_r;
  Eigen::VectorXd wx_over_jac(M);
  for (int j = 0; j < M; ++j) wx_over_jac[j] = w_[j] / (jac_[j] * jac_[j]);
  const Eigen::MatrixXd K = d1x_.transpose() * wx_over_jac.asDiagonal() * d1x_;
  const Eigen::VectorXd inv_sqrt_w =
      w_.segment(1, n).cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd T = 0.5 * inv_sqrt_w.asDiagonal() * K.block(1, 1, n, n) *
                      inv_sqrt_w.asDiagonal();
  t_kin_ = 0.5 * (T + T.transpose());

  // Cumulative quadrature via the discrete Legendre transform: expand the
  // node samples in P_k, integrate each mode analytically with
  // ∫_{-1}^x P_k = (P_{k+1} - P_{k-1}) / (2k+1), and map back to the nodes.
  Eigen::MatrixXd P(N_ + 2, M); // P(k, j) = P_k(x_j), one extra row for P_{N+1}
  for (int j = 0; j < M; ++j) {
    P(0, j) = 1.0;
    P(1, j) = x_[j];
    for (int k = 2; k <= N_ + 1; ++k)
      P(k, j) = ((2 * k - 1) * x_[j] * P(k - 1, j) - (k - 1) * P(k - 2, j)) / k;
  }
  Eigen::MatrixXd analysis(M, M); // analysis(k, j): sample -> mode coefficient
  for (int k = 0; k <= N_; ++k) {
    const double inv_gamma = (k < N_) ? (2.0 * k + 1.0) / 2.0 : N_ / 2.0;
    for (int j = 0; j < M; ++j)
      analysis(k, j) = (w_[j] / jac_[j]) * P(k, j) * inv_gamma;
  }
  Eigen::MatrixXd int_low(M, M); // int_low(i, k) = ∫_{-1}^{x_i} P_k
  for (int i = 0; i < M; ++i) {
    int_low(i, 0) = x_[i] + 1.0;
    for (int k = 1; k <= N_; ++k)
      int_low(i, k) = (P(k + 1, i) - P(k - 1, i)) / (2.0 * k + 1.0);
  }
  Eigen::MatrixXd int_high = -int_low; // ∫_{x_i}^{1} P_k = ∫_{-1}^1 - ∫_{-1}^{x_i}
  for (int i = 0; i < M; ++i) int_high(i, 0) += 2.0;
  cum_low_ = int_low * analysis * jac_.asDiagonal();
  cum_high_ = int_high * analysis * jac_.asDiagonal();
}

double RadialGrid::interpolate(const Eigen::VectorXd& f, double r_target) const {
  const int M = n_nodes();
  if (f.size() != M)
    throw std::invalid_argument("interpolate: sample vector has wrong length");
  if (r_target < -1e-12 || r_target > spec_.r_c * (1.0 + 1e-12))
    throw std::invalid_argument("interpolate: radius outside [0, r_c]");
  // Invert the map: x = (r (1 + alpha) - L) / (r + L).
  const double alpha = 2.0 * spec_.L / spec_.r_c;
  double xt = (r_target * (1.0 + alpha) - spec_.L) / (r_target + spec_.L);
  xt = std::min(1.0, std::max(-1.0, xt));
  // Snap to a node when the target coincides with one.
  for (int j = 0; j < M; ++j)
    if (std::abs(xt - x_[j]) < 1e-13) return f[j];
  // Cardinal functions: g_j(x) = -(1-x^2) P_N'(x) / (N(N+1) P_N(x_j) (x-x_j)),
  // with (1-x^2) P_N'(x) = N (P_{N-1}(x) - x P_N(x)) to stay regular at ±1.
  const LegendrePair p = legendre_pair(N_, xt);
  const double g = -N_ * (p.pnm1 - xt * p.pn);
  double acc = 0.0;
  for (int j = 0; j < M; ++j)
    acc += f[j] * g / (N_ * (N_ + 1) * pn_[j] * (xt - x_[j]));
  return acc;
}

} // namespace boxatom
