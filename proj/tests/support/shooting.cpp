#include "support/shooting.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace shooting {
namespace {

// Propagate u'' = f(r) u with the Numerov three-term recurrence and return
// (number of interior sign changes, u at r_c). f_i is sampled on the uniform
// mesh r_i = i*h, i = 0..n. The start uses the series u ~ r^{l+1}(1 - Zr/(l+1))
// valid for the Coulomb potential near the origin.
struct ShotResult {
  int nodes;
  double boundary;
};

ShotResult shoot(double Z, int l, double E, double r_c, int n) {
  const double h = r_c / n;
  const double h2 = h * h;
  auto f = [&](int i) {
    const double r = i * h;
    return l * (l + 1) / (r * r) - 2.0 * Z / r - 2.0 * E;
  };

  const double r1 = h;
  double u_curr = std::pow(r1, l + 1) * (1.0 - Z * r1 / (l + 1));
  int nodes = 0;
  double c_prev = 0.0; // (1 - h^2 f/12) u at i-1; i=0 term multiplies u(0)=0
  double c_curr = (1.0 - h2 * f(1) / 12.0) * u_curr;
  for (int i = 1; i < n; ++i) {
    const double c_next = 2.0 * c_curr + h2 * f(i) * u_curr - c_prev;
    const double u_next = c_next / (1.0 - h2 * f(i + 1) / 12.0);
    if ((u_next > 0) != (u_curr > 0)) ++nodes;
    u_curr = u_next;
    c_prev = c_curr;
    c_curr = c_next;
    // renormalize to avoid overflow in classically forbidden stretches
    if (std::abs(u_curr) > 1e200) {
      u_curr *= 1e-200;
      c_curr *= 1e-200;
      c_prev *= 1e-200;
    }
  }
  return {nodes, u_curr};
}

} // namespace

double eigenvalue(double Z, int l, int nodes, double r_c, int mesh_points) {
  // Scan upward in E until the boundary value has the target node count and
  // brackets a sign change, then bisect. The confined spectrum is bounded
  // below by the particle-in-a-sphere value shifted by the Coulomb well.
  const double pi = 3.14159265358979323846;
  double e_lo = -0.6 * Z * Z - 1.0;
  const double e_box = pi * pi / (2.0 * r_c * r_c); // scale of wall energies
  double step = 0.1 * e_box + 0.05;

  auto nodes_at = [&](double E) { return shoot(Z, l, E, r_c, mesh_points).nodes; };

  // First locate the interval in node count: eigenvalue #k (k = nodes) lies
  // where the count switches from k to k+1.
  double a = e_lo;
  while (nodes_at(a) > nodes) { // start below: lower E until count <= target
    a -= 4.0 * (std::abs(a) + 1.0);
    if (a < -1e8) throw std::runtime_error("shooting: no lower bound found");
  }
  double b = a;
  while (nodes_at(b) <= nodes) {
    b += step;
    if (b > 1e8) throw std::runtime_error("shooting: no upper bound found");
  }
  // Now count(a) <= nodes < count(b); tighten until count(a) == nodes and
  // count(b) == nodes+1 by bisection on the counting function.
  while (nodes_at(a) < nodes || nodes_at(b) > nodes + 1) {
    const double m = 0.5 * (a + b);
    if (nodes_at(m) <= nodes) a = m; else b = m;
    if (b - a < 1e-13 * (std::abs(a) + 1.0))
      throw std::runtime_error("shooting: bracket collapsed");
  }
  // The boundary value changes sign across the eigenvalue inside [a, b].
  double fa = shoot(Z, l, a, r_c, mesh_points).boundary;
  double fb = shoot(Z, l, b, r_c, mesh_points).boundary;
  if ((fa > 0) == (fb > 0))
    throw std::runtime_error("shooting: no sign change in bracket");
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = shoot(Z, l, m, r_c, mesh_points).boundary;
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
    if (b - a < 1e-14 * std::max(1.0, std::abs(a))) break;
  }
  (void)fb;
  return 0.5 * (a + b);
}

} // namespace shooting
