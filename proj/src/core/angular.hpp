#pragma once
// Angular-momentum algebra for the two-electron machinery: Clebsch-Gordan
// coefficients (Racah closed form), the piecewise multipole kernel
// derivative, and a precomputed table of m-summed shell-pair weights.

#include <map>
#include <tuple>
#include <vector>

namespace boxatom {

// log(n!) from a precomputed table; n must lie in [0, 60].
double log_factorial(int n);

// <l1 m1; l2 m2 | L M> for integer angular momenta. Returns exactly 0 when
// the triangle rule, the projection constraint M = m1 + m2, or |m| <= l is
// violated.
double clebsch_gordan(int l1, int m1, int l2, int m2, int L, int M);

// d/dr of the multipole kernel r_<^k / r_>^{k+1}:
//   r < r':  k r^{k-1} / r'^{k+1}
//   r > r':  -(k+1) r'^k / r^{k+2}
// Coincident points take the average of the two one-sided limits (the
// measure-zero choice is damped by the quadrature weights).
double multipole_kernel_derivative(double r, double rp, int k);

// Occupancy-independent angular weights for every multipole order k allowed
// between two shells of angular momenta (l, l'). The occupation statistics
// multiply these in the field and energy assembly.
class CouplingTable {
public:
  struct Entry {
    double c2_000;        // C^2(l k l'; 0 0 0)
    double pair_exchange; // C^2(l k l'; 000) / (2l'+1), symmetric in l, l'
    double same_all;      // (2l+1) C^2 for l == l' (full m-sum), else 0
    double same_diag;     // same_all / (2k+1) for l == l', else 0
  };

  // Build entries for all shell pairs drawn from l_values and every k
  // satisfying the triangle rule |l-l'| <= k <= l+l'.
  explicit CouplingTable(const std::vector<int>& l_values);

  // Throws std::out_of_range for a (l, k, l') combination outside the table.
  const Entry& at(int l, int k, int lp) const;
  bool contains(int l, int k, int lp) const;

  const std::map<std::tuple<int, int, int>, Entry>& entries() const {
    return entries_;
  }

private:
  std::map<std::tuple<int, int, int>, Entry> entries_;
};

} // namespace boxatom
