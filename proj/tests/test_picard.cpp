#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bfam/dynamics.hpp"
#include "bfam/littlewood_paley.hpp"
#include "bfam/picard.hpp"
#include "testutil.hpp"

using namespace bfam;
using test::sampled_fn;

namespace {
constexpr double pi = std::numbers::pi;

std::vector<Field> constant_mesh(const Field& f, int points) {
  return std::vector<Field>(static_cast<size_t>(points), f);
}
}  // namespace

TEST_CASE("solve_linear_transport: no advection, no source") {
  const Grid g = make_grid(2 * pi, 64);
  const Field f0 = sampled_fn(g, [](double x) { return std::cos(x); });
  const auto f = solve_linear_transport(constant_mesh(Field(g), 65),
                                        constant_mesh(Field(g), 65), f0, 1.0);
  REQUIRE(f.size() == 65);
  for (const auto& fi : f) CHECK(test::max_diff(fi, f0) <= 1e-13);
}

TEST_CASE("solve_linear_transport: constant source integrates linearly") {
  const Grid g = make_grid(2 * pi, 64);
  Field c(g);
  for (int i = 0; i < g.size(); ++i) c[i] = 0.7;
  const Field f0 = sampled_fn(g, [](double x) { return std::sin(x); });
  const auto f = solve_linear_transport(constant_mesh(Field(g), 129),
                                        constant_mesh(c, 129), f0, 2.0);
  for (int j = 0; j <= 128; j += 8) {
    const double t = 2.0 * j / 128.0;
    Field expect = f0;
    for (int i = 0; i < g.size(); ++i) expect[i] += 0.7 * t;
    CHECK(test::max_diff(f[static_cast<size_t>(j)], expect) <= 1e-12);
  }
}

TEST_CASE("solve_linear_transport: unit advection translates the profile") {
  const Grid g = make_grid(2 * pi, 128);
  Field one(g);
  for (int i = 0; i < g.size(); ++i) one[i] = 1.0;
  const Field f0 = sampled_fn(g, [](double x) { return std::sin(x); });
  // f_t - f_x = 0 => f(t,x) = sin(x + t); CFL needs h <= 0.3 dx
  const int steps = 40;  // h = 0.0125 < 0.3 * 2pi/128 = 0.0147
  const auto f = solve_linear_transport(constant_mesh(one, steps + 1),
                                        constant_mesh(Field(g), steps + 1), f0, 0.5);
  const Field expect = sampled_fn(g, [](double x) { return std::sin(x + 0.5); });
  CHECK(test::max_diff(f.back(), expect) <= 1e-6);
}

TEST_CASE("solve_linear_transport: CFL violation throws") {
  const Grid g = make_grid(2 * pi, 128);
  Field fast(g);
  for (int i = 0; i < g.size(); ++i) fast[i] = 5.0;
  const Field f0 = sampled_fn(g, [](double x) { return std::sin(x); });
  CHECK_THROWS_AS(solve_linear_transport(constant_mesh(fast, 11),
                                         constant_mesh(Field(g), 11), f0, 1.0),
                  CflViolation);
}

TEST_CASE("solve_linear_transport: linear in data and source") {
  const Grid g = make_grid(2 * pi, 64);
  std::mt19937 rng(3);
  const Field a = test::random_band_limited(g, 6, 0.3, rng);
  const Field f0 = test::random_band_limited(g, 8, 1.0, rng);
  const Field g0 = test::random_band_limited(g, 8, 1.0, rng);
  const int pts = 41;
  const auto amesh = constant_mesh(a, pts);

  const auto fa = solve_linear_transport(amesh, constant_mesh(g0, pts), f0, 0.1);
  const auto fb = solve_linear_transport(amesh, constant_mesh(Field(g), pts), f0, 0.1);
  const auto fc = solve_linear_transport(amesh, constant_mesh(g0, pts), Field(g), 0.1);
  for (size_t j = 0; j < fa.size(); ++j)
    CHECK(test::max_diff(fa[j], fb[j] + fc[j]) <= 1e-10);

  const auto f2 = solve_linear_transport(amesh, constant_mesh(2.0 * g0, pts),
                                         2.0 * f0, 0.1);
  for (size_t j = 0; j < fa.size(); ++j)
    CHECK(test::max_diff(f2[j], 2.0 * fa[j]) <= 1e-10);
}

TEST_CASE("picard_iterate: zero data stays zero") {
  const Grid g = make_grid(40.0, 128);
  const auto res = picard_iterate(Field(g), Field(g), Params::case_i(2), 4, 0.1);
  REQUIRE(res.records.size() == 4);
  for (const auto& rec : res.records) {
    CHECK(rec.gap_u == 0.0);
    CHECK(rec.gap_rho == 0.0);
    for (const auto& u : rec.u) CHECK(max_abs(u) == 0.0);
  }
  CHECK(!res.non_convergence);
}

TEST_CASE("picard_iterate: first iterate is the mollified data, frozen") {
  // n = 0: zero advection and zero sources, so u^1(t) = S_1 u0 for all t
  const Grid g = make_grid(40.0, 256);
  ProfileSpec gu{.kind = "gaussian", .amplitude = 0.3, .center = 0, .width = 2};
  const Field u0 = initial_library(g, gu);
  const auto res = picard_iterate(u0, Field(g), Params::case_i(2), 1, 0.1);
  REQUIRE(res.records.size() == 1);
  const DyadicPartition part(g);
  const Field s1 = lowpass_sj(u0, 1, part);
  for (const auto& u : res.records.front().u) CHECK(test::max_diff(u, s1) <= 1e-12);
}

TEST_CASE("picard_iterate: iterates keep rho identically zero") {
  const Grid g = make_grid(40.0, 256);
  ProfileSpec gu{.kind = "gaussian", .amplitude = 0.4, .center = 0, .width = 2};
  const auto res = picard_iterate(initial_library(g, gu), Field(g),
                                  Params::case_ii(1), 5, 0.1);
  for (const auto& rec : res.records)
    for (const auto& r : rec.rho) CHECK(max_abs(r) == 0.0);
}

TEST_CASE("picard_iterate: initial data consistency and mollifier limit") {
  const Grid g = make_grid(40.0, 256);
  ProfileSpec gu{.kind = "gaussian", .amplitude = 0.4, .center = 0, .width = 2};
  ProfileSpec gr{.kind = "gaussian", .amplitude = 0.2, .center = 1, .width = 2};
  const Field u0 = initial_library(g, gu);
  const Field rho0 = initial_library(g, gr);
  const auto res = picard_iterate(u0, rho0, Params::case_ii(1), 6, 0.05);
  const DyadicPartition part(g);

  const BesovSpec spec{1.5, 2, 1};
  double prev_dist = std::numeric_limits<double>::infinity();
  for (const auto& rec : res.records) {
    // u^{n+1}(0) = S_{n+1} u0 exactly
    CHECK(test::max_diff(rec.u.front(), lowpass_sj(u0, rec.n, part)) <= 1e-13);
    const double dist = besov_norm(rec.u.front() - u0, spec, part);
    CHECK(dist <= prev_dist * (1.0 + 1e-12) + 1e-13);
    prev_dist = dist;
  }
  // S_j u0 -> u0 once every resolvable block is kept
  CHECK(prev_dist <= 1e-10);
}

TEST_CASE("picard_iterate: geometric contraction and the nonlinear limit") {
  const Grid g = make_grid(40.0, 256);
  ProfileSpec gu{.kind = "gaussian", .amplitude = 0.25, .center = 0, .width = 2};
  ProfileSpec gr{.kind = "gaussian", .amplitude = 0.15, .center = 1, .width = 2};
  const Field u0 = initial_library(g, gu);
  const Field rho0 = initial_library(g, gr);
  const Params p = Params::case_ii(1);
  const double T = 0.1;

  PicardOptions opts;
  opts.mesh_steps = 50;
  const auto res = picard_iterate(u0, rho0, p, 8, T, opts);
  REQUIRE(res.records.size() == 8);
  CHECK(!res.non_convergence);

  // gaps decay geometrically once the mollified data has converged
  for (size_t i = 3; i < res.records.size(); ++i) {
    const double prev = res.records[i - 1].gap_u + res.records[i - 1].gap_rho;
    const double cur = res.records[i].gap_u + res.records[i].gap_rho;
    CHECK(cur <= 0.75 * prev);
  }

  // the fixed point is the nonlinear solution
  SimControls c;
  c.fixed_dt = T / opts.mesh_steps;
  const auto sim = simulate(State{0, u0, rho0}, p, T, c);
  REQUIRE(sim.status == RunStatus::completed);
  const Field& u_ref = sim.trajectory.states.back().u;
  CHECK(test::max_diff(res.records.back().u.back(), u_ref) <= 1e-4);

  // applying one more step to the converged iterate reproduces it
  const auto more = picard_iterate(u0, rho0, p, 9, T, opts);
  CHECK(test::max_diff(more.records.back().u.back(),
                       res.records.back().u.back()) <= 1e-6);
}

TEST_CASE("uniform_bound_check: zero data and smooth data") {
  const Grid g = make_grid(40.0, 256);
  const auto zero_res = picard_iterate(Field(g), Field(g), Params::case_i(2), 3, 0.1);
  const auto zero_rep = uniform_bound_check(zero_res, Field(g), Field(g), 0.1);
  CHECK(zero_rep.fitted_c == 0.0);
  CHECK(zero_rep.envelope_valid);

  ProfileSpec gu{.kind = "gaussian", .amplitude = 0.25, .center = 0, .width = 2};
  ProfileSpec gr{.kind = "gaussian", .amplitude = 0.15, .center = 1, .width = 2};
  const Field u0 = initial_library(g, gu);
  const Field rho0 = initial_library(g, gr);
  const auto res = picard_iterate(u0, rho0, Params::case_ii(1), 6, 0.1);
  const auto rep = uniform_bound_check(res, u0, rho0, 0.1);
  CHECK(rep.envelope_valid);
  CHECK(rep.initial_norm > 0.0);
  // envelope dominates the recorded sup at every mesh time and is monotone
  for (size_t j = 0; j < rep.sup_over_n.size(); ++j) {
    CHECK(rep.sup_over_n[j] <= rep.envelope[j] * (1.0 + 1e-12));
    if (j > 0) CHECK(rep.envelope[j] >= rep.envelope[j - 1] * (1.0 - 1e-12));
  }
}
