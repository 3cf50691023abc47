#pragma once
// Legendre pseudospectral grid for the radial domain [0, r_c]: Gauss-Lobatto
// collocation nodes mapped through the rational stretch r(x) = L(1+x)/(1-x+a),
// a = 2L/r_c, plus the differentiation / quadrature / cumulative-integration
// operators every other module consumes.

#include <Eigen/Dense>

#include <vector>

namespace boxatom {

struct GridSpec {
  int n_r = 300;     // interior collocation points (eigenproblem dimension)
  double L = 1.0;    // map length scale, bohr
  double r_c = 40.0; // cavity radius, bohr

  void validate() const; // throws std::invalid_argument on bad parameters
};

// Radius used for "free atom" rows: a box this large leaves the bound states
// of every system treated here converged far below the SCF thresholds.
inline constexpr double kFreeBoxRadius = 40.0;

// Gauss-Lobatto-Legendre abscissae on [-1, 1]: -1, the N-1 roots of P_N',
// and +1, ascending. Throws std::runtime_error if a Newton search fails.
std::vector<double> collocation_points(int N);

struct MapPoint {
  double r;   // mapped radius, bohr
  double jac; // dr/dx at x
};
MapPoint map_to_radial(double x, double L, double r_c);

class RadialGrid {
public:
  explicit RadialGrid(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  int n_interior() const { return spec_.n_r; }
  int n_nodes() const { return spec_.n_r + 2; }
  double r_c() const { return spec_.r_c; }

  // Node arrays, size n_nodes(); index 0 is r=0, last index is r=r_c.
  const Eigen::VectorXd& x() const { return x_; }
  const Eigen::VectorXd& r() const { return r_; }
  const Eigen::VectorXd& w() const { return w_; } // weights for ∫_0^{r_c} f dr
  const Eigen::VectorXd& jac() const { return jac_; }

  // First derivative with respect to r, acting on full-grid samples.
  const Eigen::MatrixXd& d1r() const { return d1r_; }
  // Spectral second derivative (d1r applied twice).
  const Eigen::MatrixXd& d2r() const { return d2r_; }

  // Symmetric kinetic-energy matrix (-1/2 d^2/dr^2 in weak form) on the
  // interior nodes, acting on scaled amplitudes v_i = sqrt(w_i) u(r_i).
  const Eigen::MatrixXd& t_kin() const { return t_kin_; }

  // Cumulative quadrature: (cum_low*f)_i = ∫_0^{r_i} f dr and
  // (cum_high*f)_i = ∫_{r_i}^{r_c} f dr for f sampled on the nodes.
  const Eigen::MatrixXd& cum_low() const { return cum_low_; }
  const Eigen::MatrixXd& cum_high() const { return cum_high_; }

  double integrate(const Eigen::VectorXd& f) const { return w_.dot(f); }

  // Interpolate node samples to an arbitrary radius via the Gauss-Lobatto
  // cardinal functions (exact at the nodes).
  double interpolate(const Eigen::VectorXd& f, double r_target) const;

private:
  GridSpec spec_;
  int N_; // Legendre degree: n_r + 1
  Eigen::VectorXd x_, r_, w_, jac_, pn_; // pn_ = P_N at the nodes
  Eigen::MatrixXd d1x_, d1r_, d2r_, t_kin_, cum_low_, cum_high_;
};

} // namespace boxatom
