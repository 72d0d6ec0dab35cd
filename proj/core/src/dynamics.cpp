#include "bfam/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bfam {

namespace {

void require_finite(const Field& f, double t) {
  if (!f.all_finite()) throw BlowupSuspected(t);
}

// d_x P* multiplier tables are cheap next to the transforms; build per call.
Field dx_helmholtz(const Field& f) {
  const Grid& g = f.grid();
  const auto& xi = g.bin_wavenumbers();
  std::vector<double> m(xi.size());
  for (size_t k = 0; k < xi.size(); ++k) m[k] = xi[k] / (1.0 + xi[k] * xi[k]);
  return g.apply_odd_multiplier(f, m);
}

double cfl_bound(const State& s, double cfl_safety) {
  return cfl_safety * s.u.grid().dx() / std::max(1.0, max_abs(s.u));
}

}  // namespace

std::pair<Field, Field> rhs(const State& state, const Params& params) {
  const Field& u = state.u;
  const Field& rho = state.rho;
  if (!u.grid().same_grid(rho.grid())) throw GridMismatch("rhs: u and rho grids differ");

  const Field ux = derivative(u);
  Field source = dealias((0.5 * params.k2) * (rho * rho) +
                         (0.5 * params.k1) * (u * u) +
                         (0.5 * (3.0 - params.k1)) * (ux * ux));
  Field du = dealias(u * ux) + dx_helmholtz(source);
  Field drho = params.k3 * derivative(dealias(u * rho));
  require_finite(du, state.t);
  require_finite(drho, state.t);
  return {std::move(du), std::move(drho)};
}

Field rhs_momentum(const State& state, const Params& params) {
  const Field& u = state.u;
  const Field& rho = state.rho;
  const Field ux = derivative(u);
  const Field m = u - derivative(ux);
  const Field mx = derivative(m);
  const Field rhox = derivative(rho);
  Field dm = dealias(u * mx) + params.k1 * dealias(m * ux) + params.k2 * dealias(rho * rhox);
  require_finite(dm, state.t);
  return dm;
}

State step_rk4(const State& state, double dt, const Params& params, double cfl_safety) {
  if (!(dt > 0)) throw CflViolation("step_rk4: dt must be positive");
  if (dt > cfl_bound(state, cfl_safety) * (1.0 + 1e-12))
    throw CflViolation("step_rk4: dt exceeds the CFL bound");

  const auto [ku1, kr1] = rhs(state, params);
  State s2{state.t + dt / 2, state.u + (dt / 2) * ku1, state.rho + (dt / 2) * kr1};
  const auto [ku2, kr2] = rhs(s2, params);
  State s3{state.t + dt / 2, state.u + (dt / 2) * ku2, state.rho + (dt / 2) * kr2};
  const auto [ku3, kr3] = rhs(s3, params);
  State s4{state.t + dt, state.u + dt * ku3, state.rho + dt * kr3};
  const auto [ku4, kr4] = rhs(s4, params);

  State out;
  out.t = state.t + dt;
  out.u = state.u + (dt / 6) * (ku1 + 2.0 * ku2 + 2.0 * ku3 + ku4);
  out.rho = state.rho + (dt / 6) * (kr1 + 2.0 * kr2 + 2.0 * kr3 + kr4);
  require_finite(out.u, out.t);
  require_finite(out.rho, out.t);
  return out;
}

namespace {

DiagnosticsRow diagnostics_row(const State& s, const Field& ux) {
  DiagnosticsRow row;
  row.t = s.t;
  const double uu = integrate(s.u * s.u + ux * ux);
  const double rr = integrate(s.rho * s.rho);
  row.e1 = 2.0 * rr + uu;
  row.e2 = 4.0 * rr + uu;
  row.mass = integrate(s.rho);
  row.min_ux = min_value(ux);
  row.max_ux = max_value(ux);
  row.u_inf = max_abs(s.u);
  return row;
}

}  // namespace

SimulationResult simulate(const State& init, const Params& params, double T,
                          const SimControls& controls) {
  if (!(T > 0)) throw std::invalid_argument("simulate: T must be positive");
  SimulationResult res;
  State s = init;
  s.t = 0;

  auto snapshot = [&](const State& st) {
    res.trajectory.times.push_back(st.t);
    res.trajectory.states.push_back(st);
  };

  {
    DiagnosticsRow row = diagnostics_row(s, derivative(s.u));
    res.diagnostics.push_back(row);
    snapshot(s);
    if (std::max(std::abs(row.min_ux), std::abs(row.max_ux)) > controls.blowup_threshold) {
      res.status = RunStatus::blowup_threshold;
      res.crossing_time = 0;
      res.message = "initial data already beyond the slope threshold";
      return res;
    }
  }

  int step = 0;
  try {
    while (T - s.t > 1e-14 * T && step < controls.max_steps) {
      double dt = controls.fixed_dt > 0 ? controls.fixed_dt
                                        : cfl_bound(s, controls.cfl_safety);
      dt = std::min(dt, T - s.t);
      s = step_rk4(s, dt, params, std::max(controls.cfl_safety, 1.0));
      ++step;

      const Field ux = derivative(s.u);
      const DiagnosticsRow row = diagnostics_row(s, ux);
      res.diagnostics.push_back(row);

      const double slope = std::max(std::abs(row.min_ux), std::abs(row.max_ux));
      if (slope > controls.blowup_threshold) {
        snapshot(s);
        res.status = RunStatus::blowup_threshold;
        res.crossing_time = s.t;
        res.end_time = s.t;
        res.message = "slope threshold crossed";
        return res;
      }
      if (step % controls.sample_every == 0 || !(T - s.t > 1e-14 * T)) snapshot(s);
    }
  } catch (const BlowupSuspected& e) {
    res.status = RunStatus::numerical_failure;
    res.end_time = e.t;
    res.message = e.what();
    return res;
  }
  res.status = RunStatus::completed;
  res.end_time = s.t;
  return res;
}

Field initial_library(const Grid& grid, const ProfileSpec& spec) {
  const double L = grid.length();
  Field f(grid);
  const auto& x = grid.nodes();

  if (spec.kind == "gaussian") {
    for (int i = 0; i < grid.size(); ++i) {
      const double d = wrap_periodic(x[static_cast<size_t>(i)] - spec.center, L);
      f[i] = spec.amplitude * std::exp(-(d * d) / (spec.width * spec.width));
    }
  } else if (spec.kind == "peakon") {
    // c e^{-|x-x0|} summed over periodic images (closed form)
    const double den = 1.0 - std::exp(-L);
    for (int i = 0; i < grid.size(); ++i) {
      const double d = std::abs(wrap_periodic(x[static_cast<size_t>(i)] - spec.center, L));
      f[i] = spec.amplitude * (std::exp(-d) + std::exp(d - L)) / den;
    }
  } else if (spec.kind == "sine") {
    const double k = 2.0 * std::numbers::pi * spec.mode / L;
    for (int i = 0; i < grid.size(); ++i)
      f[i] = spec.amplitude * std::sin(k * (x[static_cast<size_t>(i)] - spec.center));
  } else if (spec.kind == "bump") {
    for (int i = 0; i < grid.size(); ++i) {
      const double t = wrap_periodic(x[static_cast<size_t>(i)] - spec.center, L) / spec.width;
      f[i] = std::abs(t) < 1.0
                 ? spec.amplitude * std::exp(1.0 - 1.0 / (1.0 - t * t))
                 : 0.0;
    }
  } else if (spec.kind == "steep_front") {
    // s*w*tanh((x-x0)/w) under a wide even envelope: minimum slope s at x0
    const double w = spec.width;
    const double sig = spec.envelope > 0 ? spec.envelope : 10.0 * w;
    for (int i = 0; i < grid.size(); ++i) {
      const double d = wrap_periodic(x[static_cast<size_t>(i)] - spec.center, L);
      f[i] = spec.slope * w * std::tanh(d / w) * std::exp(-(d * d) / (sig * sig));
    }
  } else {
    throw std::invalid_argument("initial_library: unknown kind '" + spec.kind + "'");
  }
  return f;
}

}  // namespace bfam
