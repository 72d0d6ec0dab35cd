#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bfam/dynamics.hpp"
#include "bfam/helmholtz.hpp"
#include "testutil.hpp"

using namespace bfam;
using test::random_band_limited;
using test::sampled_fn;

namespace {
constexpr double pi = std::numbers::pi;

State make_state(const Grid& g, const Field& u, const Field& rho) {
  return State{0.0, u, rho};
}

// (1 - d_xx) applied spectrally
Field one_minus_dxx(const Field& f) {
  const Grid& g = f.grid();
  const auto& xi = g.bin_wavenumbers();
  std::vector<double> m(xi.size());
  for (size_t k = 0; k < xi.size(); ++k) m[k] = 1.0 + xi[k] * xi[k];
  return g.apply_multiplier(f, m);
}
}  // namespace

TEST_CASE("rhs: zero state is a fixed point") {
  const Grid g = make_grid(40.0, 128);
  const auto [du, dr] = rhs(make_state(g, Field(g), Field(g)), Params::case_i(2));
  CHECK(max_abs(du) == 0.0);
  CHECK(max_abs(dr) == 0.0);
}

TEST_CASE("rhs: k1 = 3 removes the slope-squared source term") {
  const Grid g = make_grid(2 * pi, 128);
  std::mt19937 rng(3);
  const Field u = random_band_limited(g, 10, 0.5, rng);
  const State s = make_state(g, u, Field(g));
  const Params p{3.0, 2.0, 1.0};

  // build the reduced right side u u_x + d_x P * (3/2 u^2) directly
  const HelmholtzOperator op(g);
  const Field ux = derivative(u);
  const Field expect = dealias(u * ux) + dx_helmholtz_inv(op, dealias(1.5 * (u * u)));
  const auto [du, dr] = rhs(s, p);
  CHECK(test::max_diff(du, expect) <= 1e-12);
  CHECK(max_abs(dr) <= 1e-14);
}

TEST_CASE("rhs: conservation form matches the product rule") {
  const Grid g = make_grid(2 * pi, 256);
  std::mt19937 rng(5);
  const Field u = random_band_limited(g, 12, 0.7, rng);
  const Field rho = random_band_limited(g, 12, 0.5, rng);
  const Params p = Params::case_ii(1.5);

  const auto [du, dr] = rhs(make_state(g, u, rho), p);
  const Field via_product =
      p.k3 * (dealias(u * derivative(rho)) + dealias(rho * derivative(u)));
  CHECK(test::max_diff(dr, via_product) <= 1e-10);
}

TEST_CASE("rhs_momentum: consistency with the nonlocal form") {
  // (1 - d_xx)(u-RHS) must reproduce the momentum-form RHS
  const Grid g = make_grid(2 * pi, 256);
  std::mt19937 rng(7);
  for (const Params& p :
       {Params::case_i(2), Params::case_ii(1), Params{2.5, 1.0, 0.7}}) {
    const Field u = random_band_limited(g, 12, 0.6, rng);
    const Field rho = random_band_limited(g, 12, 0.4, rng);
    const State s = make_state(g, u, rho);
    const auto [du, dr] = rhs(s, p);
    CHECK(test::max_diff(one_minus_dxx(du), rhs_momentum(s, p)) <= 1e-8);
  }
}

TEST_CASE("rhs_momentum: rho = 0, u = cos x cross-check") {
  const Grid g = make_grid(2 * pi, 256);
  const Field u = sampled_fn(g, [](double x) { return std::cos(x); });
  const State s = make_state(g, u, Field(g));
  const Params p = Params::case_i(2);
  CHECK(test::max_diff(one_minus_dxx(rhs(s, p).first), rhs_momentum(s, p)) <= 1e-8);
  CHECK(max_abs(rhs_momentum(make_state(g, Field(g), Field(g)), p)) == 0.0);
}

TEST_CASE("step_rk4: fixed point, CFL guard") {
  const Grid g = make_grid(40.0, 128);
  const State zero = make_state(g, Field(g), Field(g));
  const State after = step_rk4(zero, 0.01, Params::case_i(2));
  CHECK(max_abs(after.u) == 0.0);
  CHECK(max_abs(after.rho) == 0.0);
  CHECK(after.t == doctest::Approx(0.01));

  const Field u = sampled_fn(g, [](double x) { return 2.0 * std::exp(-x * x); });
  const State s = make_state(g, u, Field(g));
  // bound is 0.3 * dx / max(1, 2) = 0.046875
  CHECK_THROWS_AS(step_rk4(s, 0.05, Params::case_i(2)), CflViolation);
  CHECK_THROWS_AS(step_rk4(s, -0.01, Params::case_i(2)), CflViolation);
  CHECK_NOTHROW(step_rk4(s, 0.04, Params::case_i(2)));
}

TEST_CASE("step_rk4: fourth-order self convergence") {
  const Grid g = make_grid(40.0, 256);
  const Params p = Params::case_i(2);
  ProfileSpec gu{.kind = "gaussian", .amplitude = 0.5, .center = 0, .width = 2};
  ProfileSpec gr{.kind = "gaussian", .amplitude = 0.3, .center = 1, .width = 2};
  const State init = make_state(g, initial_library(g, gu), initial_library(g, gr));

  auto advance = [&](double dt) {
    State s = init;
    while (s.t < 0.1 - 1e-12) s = step_rk4(s, dt, p, 1.0);
    return s;
  };
  const State a = advance(0.025);
  const State b = advance(0.0125);
  const State c = advance(0.00625);
  const double e1 = test::max_diff(a.u, b.u);
  const double e2 = test::max_diff(b.u, c.u);
  const double order = std::log2(e1 / e2);
  CHECK(order >= 3.8);
}

TEST_CASE("simulate: zero data gives a zero trajectory") {
  const Grid g = make_grid(40.0, 128);
  const auto res = simulate(make_state(g, Field(g), Field(g)), Params::case_i(2), 0.5);
  CHECK(res.status == RunStatus::completed);
  for (const auto& s : res.trajectory.states) {
    CHECK(max_abs(s.u) == 0.0);
    CHECK(max_abs(s.rho) == 0.0);
  }
  for (const auto& row : res.diagnostics) {
    CHECK(row.e1 == 0.0);
    CHECK(row.mass == 0.0);
  }
}

TEST_CASE("simulate: conserved energies and mass on the distinguished cases") {
  const Grid g = make_grid(40.0, 512);
  ProfileSpec gu{.kind = "gaussian", .amplitude = 0.5, .center = 0, .width = 2};
  ProfileSpec gr{.kind = "gaussian", .amplitude = 0.3, .center = 1, .width = 2};
  const State init = make_state(g, initial_library(g, gu), initial_library(g, gr));

  SUBCASE("case (ii) b = 1 conserves E1") {
    const auto res = simulate(init, Params::case_ii(1), 1.0);
    REQUIRE(res.status == RunStatus::completed);
    const double e0 = res.diagnostics.front().e1;
    for (const auto& row : res.diagnostics)
      CHECK(std::abs(row.e1 - e0) / e0 <= 1e-6);
  }
  SUBCASE("case (i) b = 2 conserves E2") {
    const auto res = simulate(init, Params::case_i(2), 1.0);
    REQUIRE(res.status == RunStatus::completed);
    const double e0 = res.diagnostics.front().e2;
    for (const auto& row : res.diagnostics)
      CHECK(std::abs(row.e2 - e0) / e0 <= 1e-6);
  }
  SUBCASE("mass is conserved for any parameters") {
    const auto res = simulate(init, Params{1.7, 0.9, 1.3}, 1.0);
    REQUIRE(res.status == RunStatus::completed);
    const double m0 = res.diagnostics.front().mass;
    for (const auto& row : res.diagnostics) CHECK(std::abs(row.mass - m0) <= 1e-10);
  }
}

TEST_CASE("simulate: rho stays zero if it starts zero") {
  const Grid g = make_grid(40.0, 256);
  ProfileSpec gu{.kind = "gaussian", .amplitude = 0.6, .center = 0, .width = 1.5};
  const auto res = simulate(make_state(g, initial_library(g, gu), Field(g)),
                            Params::case_i(3), 0.5);
  REQUIRE(res.status == RunStatus::completed);
  for (const auto& s : res.trajectory.states) CHECK(max_abs(s.rho) == 0.0);
}

TEST_CASE("simulate: reformulation consistency along a run") {
  const Grid g = make_grid(40.0, 256);
  ProfileSpec gu{.kind = "gaussian", .amplitude = 0.4, .center = 0, .width = 2};
  ProfileSpec gr{.kind = "gaussian", .amplitude = 0.2, .center = -1, .width = 2};
  const Params p = Params::case_ii(1);
  const auto res = simulate(make_state(g, initial_library(g, gu), initial_library(g, gr)),
                            p, 0.5, {.sample_every = 5});
  REQUIRE(res.status == RunStatus::completed);
  for (const auto& s : res.trajectory.states) {
    const auto [du, dr] = rhs(s, p);
    CHECK(test::max_diff(one_minus_dxx(du), rhs_momentum(s, p)) <= 1e-8);
  }
}

TEST_CASE("simulate: empirical continuous dependence on the data") {
  const Grid g = make_grid(40.0, 256);
  ProfileSpec gu{.kind = "gaussian", .amplitude = 0.4, .center = 0, .width = 2};
  ProfileSpec gr{.kind = "gaussian", .amplitude = 0.25, .center = 0.5, .width = 2};
  const Field u0 = initial_library(g, gu);
  const Field rho0 = initial_library(g, gr);
  const Field bump = sampled_fn(g, [](double x) { return std::exp(-x * x / 4.0); });
  const Params p = Params::case_i(2);

  const auto base = simulate(make_state(g, u0, rho0), p, 0.5);
  REQUIRE(base.status == RunStatus::completed);
  auto h1_dist = [&](double eps) {
    const auto pert = simulate(make_state(g, u0 + eps * bump, rho0), p, 0.5);
    REQUIRE(pert.status == RunStatus::completed);
    const Field d = pert.trajectory.states.back().u - base.trajectory.states.back().u;
    const Field dx = derivative(d);
    return std::sqrt(integrate(d * d + dx * dx));
  };
  const double r3 = h1_dist(1e-3) / 1e-3;
  const double r4 = h1_dist(1e-4) / 1e-4;
  const double ratio = r3 / r4;
  CHECK(ratio <= 3.0);
  CHECK(ratio >= 1.0 / 3.0);
}

TEST_CASE("simulate: slope threshold stop is reported, not thrown") {
  // in this sign convention positive slopes steepen; a mirrored steep front
  // with sup u0_x = 6 above sqrt(2) B is driven past the threshold while the
  // front is still fully resolved
  const Grid g = make_grid(20.0, 4096);
  ProfileSpec sf{.kind = "steep_front", .width = 0.1, .slope = -6.0};
  const Field u0 = -1.0 * initial_library(g, sf);
  SimControls c;
  c.blowup_threshold = 12.0;
  c.sample_every = 20;
  const auto res = simulate(make_state(g, u0, Field(g)), Params::case_i(2), 1.0, c);
  CHECK(res.status == RunStatus::blowup_threshold);
  CHECK(std::isfinite(res.crossing_time));
  CHECK(res.crossing_time > 0.0);
  CHECK(res.crossing_time < 0.5);
  // the final snapshot carries the crossing
  const Field ux = derivative(res.trajectory.states.back().u);
  CHECK(max_abs(ux) > 12.0);
}

TEST_CASE("initial_library: profile shapes") {
  const Grid g = make_grid(40.0, 2048);

  ProfileSpec pk{.kind = "peakon", .amplitude = 1.0, .center = 0.0};
  const Field peak = initial_library(g, pk);
  // value at the crest; x = 0 is a node
  CHECK(peak[g.size() / 2] == doctest::Approx(1.0).epsilon(1e-12));

  ProfileSpec ga{.kind = "gaussian", .amplitude = 0.7, .center = 0.0, .width = 1.5};
  const Field gauss = initial_library(g, ga);
  for (int i = 1; i < g.size() / 2; ++i)
    CHECK(gauss[g.size() / 2 + i] ==
          doctest::Approx(gauss[g.size() / 2 - i]).epsilon(1e-13));

  ProfileSpec sf{.kind = "steep_front", .width = 0.4, .slope = -5.0};
  const Field front = initial_library(g, sf);
  const double got = min_value(derivative(front));
  CHECK(std::abs(got - (-5.0)) <= 0.02 * 5.0);

  ProfileSpec bu{.kind = "bump", .amplitude = 1.0, .center = 3.0, .width = 2.0};
  const Field bump = initial_library(g, bu);
  for (int i = 0; i < g.size(); ++i) {
    const double x = g.nodes()[static_cast<size_t>(i)];
    if (std::abs(x - 3.0) >= 2.0) CHECK(bump[i] == 0.0);
  }

  CHECK_THROWS_AS(initial_library(g, ProfileSpec{.kind = "sawtooth"}),
                  std::invalid_argument);
}
