#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/eigensolver.hpp"
#include "core/errors.hpp"
#include "core/grid.hpp"

#include "support/confined_h_reference.hpp"

#include <cmath>
#include <limits>
#include <vector>

using boxatom::ChannelState;
using boxatom::GridSpec;
using boxatom::RadialGrid;
using boxatom::solve_channel;

namespace {

RadialGrid make_grid(int n_r, double r_c) {
  GridSpec spec;
  spec.n_r = n_r;
  spec.r_c = r_c;
  return RadialGrid(spec);
}

Eigen::VectorXd coulomb(const RadialGrid& g, double Z) {
  const int n = g.n_interior();
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = -Z / g.r()[i + 1];
  return v;
}

int count_sign_changes(const Eigen::VectorXd& u) {
  int nodes = 0;
  double prev = 0.0;
  for (int i = 0; i < u.size(); ++i) {
    if (u[i] == 0.0) continue;
    if (prev != 0.0 && (u[i] > 0.0) != (prev > 0.0)) ++nodes;
    prev = u[i];
  }
  return nodes;
}

} // namespace

TEST_CASE("empty sphere levels: pi^2 k^2 / 2 with correct nodes and signs") {
  const RadialGrid g = make_grid(120, 1.0);
  const Eigen::VectorXd v = Eigen::VectorXd::Zero(g.n_interior());
  const auto states = solve_channel(v, g, 0, 4);
  REQUIRE(states.size() == 4);
  for (int k = 0; k < 4; ++k) {
    const double exact = M_PI * M_PI * (k + 1) * (k + 1) / 2.0;
    CHECK(states[k].eps == doctest::Approx(exact).epsilon(1e-8));
    CHECK(count_sign_changes(states[k].u) == k);
    CHECK(states[k].u[0] > 0.0);
    // quadrature normalization
    const double norm = g.w().segment(1, g.n_interior()).dot(
        states[k].u.cwiseProduct(states[k].u));
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
  }
  for (int k = 1; k < 4; ++k) CHECK(states[k].eps > states[k - 1].eps);
}

TEST_CASE("orthonormality between channel states") {
  const RadialGrid g = make_grid(150, 2.0);
  const auto states = solve_channel(coulomb(g, 2.0), g, 0, 5);
  const Eigen::VectorXd w = g.w().segment(1, g.n_interior());
  for (size_t a = 0; a < states.size(); ++a)
    for (size_t b = 0; b < a; ++b) {
      const double ip = w.dot(states[a].u.cwiseProduct(states[b].u));
      CHECK(std::abs(ip) < 1e-9);
    }
}

TEST_CASE("free-limit hydrogen ground state") {
  const RadialGrid g = make_grid(300, 40.0);
  const auto states = solve_channel(coulomb(g, 1.0), g, 0, 1);
  CHECK(states[0].eps == doctest::Approx(-0.5).epsilon(1e-7));
}

TEST_CASE("confined hydrogen matches the independent shooting oracle") {
  for (const auto& ref : confined_h::table) {
    const RadialGrid g = make_grid(300, ref.r_c);
    const auto states =
        solve_channel(coulomb(g, ref.Z), g, ref.l, ref.nodes + 1);
    const double got = states[static_cast<size_t>(ref.nodes)].eps;
    CHECK(std::abs(got - ref.energy) < 1e-6);
  }
}

TEST_CASE("centrifugal term raises the p and d ladders above s") {
  const RadialGrid g = make_grid(200, 5.0);
  const double es = solve_channel(coulomb(g, 1.0), g, 0, 1)[0].eps;
  const double ep = solve_channel(coulomb(g, 1.0), g, 1, 1)[0].eps;
  const double ed = solve_channel(coulomb(g, 1.0), g, 2, 1)[0].eps;
  CHECK(es < ep);
  CHECK(ep < ed);
}

TEST_CASE("empty-sphere spectrum scales as 1/r_c^2") {
  std::vector<double> eps;
  for (double r_c : {0.5, 1.0, 2.0}) {
    const RadialGrid g = make_grid(100, r_c);
    const Eigen::VectorXd v = Eigen::VectorXd::Zero(g.n_interior());
    eps.push_back(solve_channel(v, g, 0, 1)[0].eps * r_c * r_c);
  }
  CHECK(std::abs(eps[0] - eps[1]) < 1e-9 * std::abs(eps[1]));
  CHECK(std::abs(eps[2] - eps[1]) < 1e-9 * std::abs(eps[1]));
}

TEST_CASE("input validation") {
  const RadialGrid g = make_grid(50, 1.0);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(g.n_interior());
  CHECK_THROWS_AS(solve_channel(v, g, -1, 1), std::invalid_argument);
  CHECK_THROWS_AS(solve_channel(v, g, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(solve_channel(v, g, 0, g.n_interior() + 1), std::invalid_argument);
  Eigen::VectorXd bad = v;
  bad[7] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(solve_channel(bad, g, 0, 1), std::invalid_argument);
  Eigen::VectorXd wrong(g.n_interior() + 5);
  wrong.setZero();
  CHECK_THROWS_AS(solve_channel(wrong, g, 0, 1), std::invalid_argument);
}
