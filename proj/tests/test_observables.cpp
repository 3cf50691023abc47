#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/config.hpp"
#include "core/fields.hpp"
#include "core/grid.hpp"
#include "core/observables.hpp"
#include "core/scf.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using boxatom::configuration_from_label;
using boxatom::correlation_scan;
using boxatom::DensityField;
using boxatom::GridSpec;
using boxatom::Mode;
using boxatom::moment_set;
using boxatom::MomentSet;
using boxatom::radial_distribution;
using boxatom::radial_moment;
using boxatom::RadialGrid;
using boxatom::refresh_derivatives;
using boxatom::ScfOptions;
using boxatom::scf_solve;
using boxatom::SCFResult;

namespace {

GridSpec box(double r_c, int n_r = 300) {
  GridSpec spec;
  spec.r_c = r_c;
  spec.n_r = n_r;
  return spec;
}

SCFResult helium(double r_c, Mode mode = Mode::x_only, int n_r = 300) {
  return scf_solve(configuration_from_label(2.0, "1s2_1S"), box(r_c, n_r),
                   mode);
}

// Uniform ball of N electrons filling the box: <r^k> = 3 N r_c^k / (k+3).
DensityField uniform_ball(const RadialGrid& g, double N) {
  DensityField d;
  const double rho0 = 3.0 * N / (4.0 * M_PI * std::pow(g.r_c(), 3));
  d.rho_up = Eigen::VectorXd::Constant(g.n_nodes(), rho0 / 2.0);
  d.rho_down = d.rho_up;
  refresh_derivatives(d, g);
  d.n_electrons = N;
  return d;
}

} // namespace

TEST_CASE("radial moments: closed-form ball, rejection, normalization") {
  const RadialGrid g(box(2.0, 160));
  const DensityField ball = uniform_ball(g, 2.0);
  for (int k : {-2, -1, 0, 1, 2, 3, 4}) {
    const double expected = 3.0 * 2.0 * std::pow(2.0, k) / (k + 3.0);
    CHECK(radial_moment(ball, k, g) == doctest::Approx(expected).epsilon(1e-10));
  }
  CHECK_THROWS_AS(radial_moment(ball, -3, g), std::invalid_argument);
  CHECK_THROWS_AS(radial_moment(ball, -5, g), std::invalid_argument);
}

TEST_CASE("compressed-helium moments match the tabulated state") {
  const auto state = helium(1.0);
  const RadialGrid g(box(1.0));
  const MomentSet m = moment_set(state.density, g);
  CHECK(m.n_electrons == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(m.m_1 == doctest::Approx(0.883).scale(1.0).epsilon(5e-3));
  CHECK(m.m_2 == doctest::Approx(0.459).scale(1.0).epsilon(5e-3));
  CHECK(m.m_minus1 == doctest::Approx(5.934).scale(1.0).epsilon(5e-3));

  // Cauchy-Schwarz and boundedness inside the cavity
  CHECK(m.m_1 * m.m_1 <= m.m_2 * m.n_electrons);
  for (double v : {m.m_minus2, m.m_minus1, m.m_1, m.m_2, m.m_3, m.m_4})
    CHECK(v > 0.0);
  CHECK(m.m_1 <= m.n_electrons * 1.0);
  CHECK(m.m_2 <= m.n_electrons * 1.0);
  CHECK(m.m_4 <= m.n_electrons * 1.0);

  // the unit-normalized convention is the same set divided by N
  const MomentSet u = moment_set(state.density, g, true);
  CHECK(u.m_1 == doctest::Approx(m.m_1 / 2.0).epsilon(1e-12));
  CHECK(u.m_minus2 == doctest::Approx(m.m_minus2 / 2.0).epsilon(1e-12));

  // V_en of the state is -Z <1/r> over the same quadrature
  CHECK(state.V_en == doctest::Approx(-2.0 * m.m_minus1).epsilon(1e-9));
}

TEST_CASE("free-helium moments land on the free-atom row") {
  const auto state = helium(40.0);
  const RadialGrid g(box(40.0));
  const MomentSet m = moment_set(state.density, g);
  CHECK(m.m_minus1 == doctest::Approx(3.37).scale(1.0).epsilon(1e-2));
  CHECK(m.m_1 == doctest::Approx(1.851).scale(1.0).epsilon(1e-2));
  CHECK(m.m_2 == doctest::Approx(2.362).scale(1.0).epsilon(1e-2));
}

TEST_CASE("moments are stable under grid refinement") {
  const auto coarse = helium(1.0, Mode::x_only, 200);
  const auto fine = helium(1.0, Mode::x_only, 300);
  const MomentSet mc = moment_set(coarse.density, RadialGrid(box(1.0, 200)));
  const MomentSet mf = moment_set(fine.density, RadialGrid(box(1.0, 300)));
  const double pairs[][2] = {{mc.m_minus2, mf.m_minus2},
                             {mc.m_minus1, mf.m_minus1},
                             {mc.m_1, mf.m_1},
                             {mc.m_2, mf.m_2},
                             {mc.m_3, mf.m_3},
                             {mc.m_4, mf.m_4}};
  for (const auto& p : pairs)
    CHECK(std::abs(p[0] - p[1]) < 1e-6 * std::abs(p[1]));
}

TEST_CASE("radial distributions: norms, nodes, and compression of the peak") {
  const GridSpec spec = box(2.0);
  const RadialGrid g(spec);
  const auto state = scf_solve(configuration_from_label(2.0, "1s2s_3S"), spec,
                               Mode::x_only);
  const auto dist = radial_distribution(state, g);

  REQUIRE(dist.orbital_nodes.size() == 2);
  REQUIRE(dist.orbital_uniform.size() == 2);
  CHECK(dist.r_uniform.size() == 1000);
  CHECK(dist.r_uniform[0] == 0.0);
  CHECK(dist.r_uniform[999] == doctest::Approx(2.0).epsilon(1e-15));

  // each orbital distribution integrates to one electron
  for (const auto& d : dist.orbital_nodes)
    CHECK(g.integrate(d) == doctest::Approx(1.0).epsilon(1e-8));
  // and the weighted total to N
  CHECK(g.integrate(dist.total_nodes) == doctest::Approx(2.0).epsilon(1e-8));

  // the 2s amplitude crosses zero exactly once inside the cavity
  const auto& u2s = state.orbitals[1].u;
  int crossings = 0;
  for (int i = 1; i < u2s.size(); ++i)
    if (u2s[i - 1] * u2s[i] < 0.0) ++crossings;
  CHECK(state.orbitals[1].n == 2);
  CHECK(crossings == 1);

  // distributions stay nonnegative between nodes by construction
  CHECK(dist.total_uniform.minCoeff() >= 0.0);
  for (const auto& d : dist.orbital_uniform) CHECK(d.minCoeff() >= 0.0);

  CHECK_THROWS_AS(radial_distribution(state, g, 1), std::invalid_argument);
}

TEST_CASE("squeezing the box raises the 1s peak but barely moves it") {
  const auto tight = helium(1.0);
  const auto loose = helium(3.0);
  const RadialGrid g1(box(1.0));
  const RadialGrid g3(box(3.0));
  const auto d1 = radial_distribution(tight, g1);
  const auto d3 = radial_distribution(loose, g3);

  int i1, i3;
  const double h1 = d1.orbital_uniform[0].maxCoeff(&i1);
  const double h3 = d3.orbital_uniform[0].maxCoeff(&i3);
  const double pos1 = d1.r_uniform[i1];
  const double pos3 = d3.r_uniform[i3];
  CHECK(h1 > h3);
  CHECK(std::abs(pos1 - pos3) < std::abs(h1 - h3));
}

TEST_CASE("correlation scan: trends, exchange-only zeroes, flagged failures") {
  const auto config = configuration_from_label(2.0, "1s2_1S");

  const auto wigner =
      correlation_scan(config, {5.0, 0.5}, Mode::xc_wigner, box(5.0));
  REQUIRE(wigner.size() == 2);
  for (const auto& pt : wigner) {
    CHECK(pt.converged);
    CHECK(pt.error.empty());
    CHECK(pt.E_c < 0.0);
    CHECK(pt.gap == doctest::Approx(pt.E_total - pt.E_x_only).epsilon(1e-12));
  }
  CHECK(std::abs(wigner[1].E_c) > std::abs(wigner[0].E_c));

  const auto bare = correlation_scan(config, {2.0}, Mode::x_only, box(2.0));
  REQUIRE(bare.size() == 1);
  CHECK(bare[0].converged);
  CHECK(bare[0].E_c == 0.0);
  CHECK(bare[0].gap == 0.0);
  CHECK(bare[0].E_total == bare[0].E_x_only);

  // an impossible iteration budget flags every point but never throws
  ScfOptions strangled;
  strangled.max_iter = 2;
  const auto flagged = correlation_scan(config, {1.0, 2.0}, Mode::xc_wigner,
                                        box(1.0), strangled);
  REQUIRE(flagged.size() == 2);
  for (const auto& pt : flagged) {
    CHECK(!pt.converged);
    CHECK(pt.error.find("did not converge") != std::string::npos);
    CHECK(pt.r_c > 0.0);
  }
}

TEST_CASE("LYP correlation magnitude dips at intermediate confinement") {
  const auto config = configuration_from_label(2.0, "1s2_1S");
  const auto scan =
      correlation_scan(config, {5.0, 1.0, 0.5}, Mode::xc_lyp, box(5.0));
  REQUIRE(scan.size() == 3);
  for (const auto& pt : scan) CHECK(pt.converged);
  CHECK(std::abs(scan[1].E_c) < std::abs(scan[0].E_c));
  CHECK(std::abs(scan[1].E_c) < std::abs(scan[2].E_c));
}
