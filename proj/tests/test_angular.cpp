#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/angular.hpp"

#include <cmath>
#include <stdexcept>

using boxatom::CouplingTable;
using boxatom::clebsch_gordan;
using boxatom::log_factorial;
using boxatom::multipole_kernel_derivative;

TEST_CASE("log-factorial table") {
  CHECK(log_factorial(0) == 0.0);
  CHECK(log_factorial(1) == 0.0);
  CHECK(log_factorial(5) == doctest::Approx(std::log(120.0)).epsilon(1e-15));
  CHECK(log_factorial(60) == doctest::Approx(std::lgamma(61.0)).epsilon(1e-14));
  CHECK_THROWS_AS(log_factorial(-1), std::out_of_range);
  CHECK_THROWS_AS(log_factorial(61), std::out_of_range);
}

TEST_CASE("Clebsch-Gordan anchor values") {
  CHECK(clebsch_gordan(0, 0, 0, 0, 0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(clebsch_gordan(1, 0, 1, 0, 0, 0) ==
        doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(clebsch_gordan(1, 1, 1, -1, 2, 0) ==
        doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-14));
  // Stretched state couples with unit weight.
  CHECK(clebsch_gordan(2, 2, 1, 1, 3, 3) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("selection rules return exact zeros") {
  CHECK(clebsch_gordan(1, 0, 1, 0, 3, 0) == 0.0); // triangle violated
  CHECK(clebsch_gordan(1, 1, 1, 0, 2, 0) == 0.0); // M != m1 + m2
  CHECK(clebsch_gordan(1, 2, 1, -2, 0, 0) == 0.0); // |m| > l
}

TEST_CASE("parity zeros for the 000 coefficient, exhaustively to l=6") {
  for (int l = 0; l <= 6; ++l)
    for (int k = 0; k <= 6; ++k)
      for (int lp = 0; lp <= 6; ++lp)
        if ((l + k + lp) % 2 == 1)
          CHECK(clebsch_gordan(l, 0, k, 0, lp, 0) == 0.0);
}

TEST_CASE("orthogonality over all couplings with l1, l2 <= 4") {
  for (int l1 = 0; l1 <= 4; ++l1)
    for (int l2 = 0; l2 <= 4; ++l2)
      for (int L = std::abs(l1 - l2); L <= l1 + l2; ++L)
        for (int Lq = std::abs(l1 - l2); Lq <= l1 + l2; ++Lq)
          for (int M = -L; M <= L; ++M) {
            double s = 0.0;
            for (int m1 = -l1; m1 <= l1; ++m1) {
              const int m2 = M - m1;
              if (std::abs(m2) > l2) continue;
              s += clebsch_gordan(l1, m1, l2, m2, L, M) *
                   clebsch_gordan(l1, m1, l2, m2, Lq, M);
            }
            const double expect = (L == Lq) ? 1.0 : 0.0;
            CHECK(std::abs(s - expect) < 1e-12);
          }
}

TEST_CASE("exchange symmetry phase (-1)^{l1+l2-L}") {
  for (int l1 = 0; l1 <= 4; ++l1)
    for (int l2 = 0; l2 <= 4; ++l2)
      for (int L = std::abs(l1 - l2); L <= l1 + l2; ++L)
        for (int m1 = -l1; m1 <= l1; ++m1)
          for (int m2 = -l2; m2 <= l2; ++m2) {
            const int M = m1 + m2;
            if (std::abs(M) > L) continue;
            const double lhs = clebsch_gordan(l1, m1, l2, m2, L, M);
            const double rhs = clebsch_gordan(l2, m2, l1, m1, L, M);
            const double phase = ((l1 + l2 - L) % 2 == 0) ? 1.0 : -1.0;
            CHECK(std::abs(lhs - phase * rhs) < 1e-13);
          }
}

TEST_CASE("m-sum identity: sum_m <l m; k 0|l m>^2 = (2l+1)/(2k+1)") {
  for (int l = 0; l <= 4; ++l)
    for (int k = 0; k <= 2 * l; k += 2) {
      double s = 0.0;
      for (int m = -l; m <= l; ++m) {
        const double c = clebsch_gordan(l, m, k, 0, l, m);
        s += c * c;
      }
      CHECK(s == doctest::Approx((2.0 * l + 1.0) / (2.0 * k + 1.0)).epsilon(1e-13));
    }
}

TEST_CASE("multipole kernel derivative branches") {
  CHECK(multipole_kernel_derivative(0.5, 2.0, 0) == 0.0);
  CHECK(multipole_kernel_derivative(3.0, 2.0, 0) ==
        doctest::Approx(-1.0 / 9.0).epsilon(1e-15));
  CHECK(multipole_kernel_derivative(1.0, 2.0, 1) ==
        doctest::Approx(0.25).epsilon(1e-15));
  // Coincident points: average of the one-sided limits.
  const double below = 1.0 * 1.0 / std::pow(2.0, 2); // k r^{k-1}/rp^{k+1} at k=1, r=rp=2
  const double above = -2.0 * 2.0 / std::pow(2.0, 3); // -(k+1) rp^k/r^{k+2}
  CHECK(multipole_kernel_derivative(2.0, 2.0, 1) ==
        doctest::Approx(0.5 * (below + above)).epsilon(1e-15));
  CHECK_THROWS_AS(multipole_kernel_derivative(0.0, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(multipole_kernel_derivative(1.0, 1.0, -1), std::invalid_argument);
}

TEST_CASE("coupling table entries") {
  const CouplingTable table({0, 1, 2});

  // Monopole: C^2(l 0 l;000) = 1 for every l.
  for (int l : {0, 1, 2}) {
    const auto& e = table.at(l, 0, l);
    CHECK(e.c2_000 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e.pair_exchange == doctest::Approx(1.0 / (2.0 * l + 1.0)).epsilon(1e-14));
    CHECK(e.same_all == doctest::Approx(2.0 * l + 1.0).epsilon(1e-14));
    CHECK(e.same_diag == doctest::Approx(2.0 * l + 1.0).epsilon(1e-14));
  }

  // p-p quadrupole: C^2(1 2 1;000) = 2/5.
  CHECK(table.at(1, 2, 1).c2_000 == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(table.at(1, 2, 1).same_all == doctest::Approx(1.2).epsilon(1e-14));
  CHECK(table.at(1, 2, 1).same_diag == doctest::Approx(0.24).epsilon(1e-14));

  // s-p dipole: C^2(0 1 1;000) = 1, pair weight 1/3.
  CHECK(table.at(0, 1, 1).c2_000 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(table.at(0, 1, 1).pair_exchange == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  // Pair-exchange weight is symmetric under l <-> l'.
  for (const auto& [key, e] : table.entries()) {
    const auto [l, k, lp] = key;
    CHECK(std::isfinite(e.c2_000));
    CHECK(e.c2_000 >= 0.0);
    CHECK(e.pair_exchange >= 0.0);
    CHECK(table.at(lp, k, l).pair_exchange ==
          doctest::Approx(e.pair_exchange).epsilon(1e-13));
    if ((l + k + lp) % 2 == 1) CHECK(e.c2_000 == 0.0);
  }

  // Triangle rule bounds the stored keys.
  CHECK(table.contains(1, 1, 2));
  CHECK(!table.contains(1, 4, 2));
  CHECK_THROWS_AS(table.at(0, 3, 1), std::out_of_range);
}
