#include "core/angular.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace boxatom {
namespace {

constexpr int kMaxFactorial = 60;

const std::array<double, kMaxFactorial + 1>& log_factorial_table() {
  static const auto table = [] {
    std::array<double, kMaxFactorial + 1> t{};
    t[0] = 0.0;
    for (int n = 1; n <= kMaxFactorial; ++n) t[n] = t[n - 1] + std::log(n);
    return t;
  }();
  return table;
}

bool triangle_ok(int a, int b, int c) {
  return c >= std::abs(a - b) && c <= a + b;
}

} // namespace

double log_factorial(int n) {
  if (n < 0 || n > kMaxFactorial)
    throw std::out_of_range("log_factorial: argument " + std::to_string(n) +
                            " outside [0, 60]");
  return log_factorial_table()[n];
}

double clebsch_gordan(int l1, int m1, int l2, int m2, int L, int M) {
  if (l1 < 0 || l2 < 0 || L < 0) return 0.0;
  if (M != m1 + m2) return 0.0;
  if (std::abs(m1) > l1 || std::abs(m2) > l2 || std::abs(M) > L) return 0.0;
  if (!triangle_ok(l1, l2, L)) return 0.0;
  // Parity selection: the all-zero projection vanishes identically for odd
  // l1 + l2 + L (forced by the (-1)^{l1+l2-L} exchange phase).
  if (m1 == 0 && m2 == 0 && (l1 + l2 + L) % 2 == 1) return 0.0;

  // Racah's closed form. The triangle coefficient and the m-dependent square
  // roots are assembled in log space to keep l <= 6 exact in doubles.
  const double log_delta =
      0.5 * (log_factorial(l1 + l2 - L) + log_factorial(l1 - l2 + L) +
             log_factorial(-l1 + l2 + L) - log_factorial(l1 + l2 + L + 1));
  const double log_front =
      0.5 * (std::log(2.0 * L + 1.0) + log_factorial(l1 + m1) +
             log_factorial(l1 - m1) + log_factorial(l2 + m2) +
             log_factorial(l2 - m2) + log_factorial(L + M) +
             log_factorial(L - M));

  const int t_min = std::max({0, l2 - L - m1, l1 + m2 - L});
  const int t_max = std::min({l1 + l2 - L, l1 - m1, l2 + m2});
  double sum = 0.0;
  for (int t = t_min; t <= t_max; ++t) {
    const double log_den =
        log_factorial(t) + log_factorial(l1 + l2 - L - t) +
        log_factorial(l1 - m1 - t) + log_factorial(l2 + m2 - t) +
        log_factorial(L - l2 + m1 + t) + log_factorial(L - l1 - m2 + t);
    const double term = std::exp(log_delta + log_front - log_den);
    sum += (t % 2 == 0) ? term : -term;
  }
  return sum;
}

double multipole_kernel_derivative(double r, double rp, int k) {
  if (!(r > 0.0) || !(rp > 0.0))
    throw std::invalid_argument("multipole_kernel_derivative: radii must be positive");
  if (k < 0)
    throw std::invalid_argument("multipole_kernel_derivative: order must be >= 0");
  const auto below = [&] {
    return k == 0 ? 0.0 : k * std::pow(r, k - 1) / std::pow(rp, k + 1);
  };
  const auto above = [&] {
    return -(k + 1) * std::pow(rp, k) / std::pow(r, k + 2);
  };
  if (r < rp) return below();
  if (r > rp) return above();
  return 0.5 * (below() + above());
}

CouplingTable::CouplingTable(const std::vector<int>& l_values) {
  for (int l : l_values)
    for (int lp : l_values)
      for (int k = std::abs(l - lp); k <= l + lp; ++k) {
        const double c = clebsch_gordan(l, 0, k, 0, lp, 0);
        Entry e;
        e.c2_000 = c * c;
        e.pair_exchange = e.c2_000 / (2.0 * lp + 1.0);
        e.same_all = (l == lp) ? (2.0 * l + 1.0) * e.c2_000 : 0.0;
        e.same_diag = (l == lp) ? e.same_all / (2.0 * k + 1.0) : 0.0;
        entries_[{l, k, lp}] = e;
      }
}

const CouplingTable::Entry& CouplingTable::at(int l, int k, int lp) const {
  const auto it = entries_.find({l, k, lp});
  if (it == entries_.end())
    throw std::out_of_range("CouplingTable: no entry for (l=" + std::to_string(l) +
                            ", k=" + std::to_string(k) + ", l'=" + std::to_string(lp) + ")");
  return it->second;
}

bool CouplingTable::contains(int l, int k, int lp) const {
  return entries_.count({l, k, lp}) != 0;
}

} // namespace boxatom
