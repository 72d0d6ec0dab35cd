#include "bfam/blowup.hpp"

#include <algorithm>
#include <cmath>

#include "bfam/littlewood_paley.hpp"

namespace bfam {

double energy(const State& state, int n) {
  if (n != 1 && n != 2) throw std::invalid_argument("energy: n must be 1 or 2");
  const Field ux = derivative(state.u);
  double acc = 0.0;
  for (int i = 0; i < state.u.size(); ++i)
    acc += 2.0 * n * state.rho[i] * state.rho[i] + state.u[i] * state.u[i] +
           ux[i] * ux[i];
  return acc * state.u.grid().dx();
}

double compute_B(double en0, double m_bound, double rho0_l1, double k2,
                 bool energy_squared) {
  if (en0 < 0 || m_bound < 0 || rho0_l1 < 0)
    throw std::invalid_argument("compute_B: inputs must be nonnegative");
  if (!(k2 > 0)) throw std::invalid_argument("compute_B: k2 must be positive");
  const double e_term = energy_squared ? en0 * en0 : en0;
  return 0.5 * std::sqrt(e_term + k2 * m_bound * rho0_l1);
}

CriterionResult check_criterion(const Field& u0, double b_const) {
  if (b_const < 0) throw std::invalid_argument("check_criterion: B must be >= 0");
  const Field ux = derivative(u0);
  CriterionResult res;
  res.node = argmin_node(ux);
  res.min_slope = ux[res.node];
  res.met = res.min_slope < -std::sqrt(2.0) * b_const;
  if (res.met) res.x0 = u0.grid().nodes()[static_cast<size_t>(res.node)];
  return res;
}

double riccati_bound(double m0, double b_const) {
  const double s = std::sqrt(2.0) * b_const;
  if (!(b_const > 0) || !(m0 > s))
    throw UndefinedBound("riccati_bound: requires B > 0 and m0 > sqrt(2) B");
  return -(1.0 / s) * std::log((m0 - s) / (m0 + s));
}

double riccati_solution(double m0, double b_const, double t) {
  const double s = std::sqrt(2.0) * b_const;
  if (s == 0.0) return m0 / (1.0 - 0.5 * m0 * t);  // pure Riccati m' = m^2/2
  const double r0 = (m0 - s) / (m0 + s);
  const double e = r0 * std::exp(s * t);
  return s * (1.0 + e) / (1.0 - e);
}

std::vector<ExtremaRow> monitor_extrema(const Trajectory& traj) {
  std::vector<ExtremaRow> rows;
  rows.reserve(traj.states.size());
  for (const auto& s : traj.states) {
    const Field ux = derivative(s.u);
    ExtremaRow row;
    row.t = s.t;
    const int node = argmin_node(ux);
    row.m = ux[node];
    row.xi_argmin = s.u.grid().nodes()[static_cast<size_t>(node)];
    row.max_ux = max_value(ux);
    row.u_inf = max_abs(s.u);
    rows.push_back(row);
  }
  for (size_t i = 1; i + 1 < rows.size(); ++i)
    rows[i].dm_dt = (rows[i + 1].m - rows[i - 1].m) / (rows[i + 1].t - rows[i - 1].t);
  return rows;
}

UinftyReport verify_uinfty_bound(const State& state) {
  UinftyReport rep;
  rep.u_inf = max_abs(state.u);
  rep.bound = 0.5 * std::sqrt(2.0) * sobolev_norm(state.u, 1.0);
  rep.ok = rep.u_inf <= rep.bound * (1.0 + 1e-8);
  return rep;
}

BlowupReport build_blowup_report(const State& init, const Params& params,
                                 const SimulationResult& sim, int n, double m_user,
                                 bool energy_squared) {
  BlowupReport rep;
  rep.n = n;
  rep.energy_squared = energy_squared;
  rep.en0 = energy(init, n);
  rep.rho0_l1 = lp_norm(init.rho, 1.0);

  double m_meas = 0;
  for (const auto& s : sim.trajectory.states) m_meas = std::max(m_meas, max_abs(s.rho));
  rep.m_supplied = m_user >= 0;
  rep.m_bound = rep.m_supplied ? m_user : m_meas;

  rep.b_const = compute_B(rep.en0, rep.m_bound, rep.rho0_l1, params.k2, energy_squared);
  rep.criterion = check_criterion(init.u, rep.b_const);
  const Field u0x = derivative(init.u);
  rep.m0 = min_value(u0x);
  rep.sup_u0x = max_value(u0x);

  const double s2b = std::sqrt(2.0) * rep.b_const;
  if (rep.b_const > 0 && rep.sup_u0x > s2b)
    rep.t0_bound = riccati_bound(rep.sup_u0x, rep.b_const);

  if (sim.status == RunStatus::blowup_threshold) rep.observed_crossing = sim.crossing_time;
  switch (sim.status) {
    case RunStatus::completed: rep.status = "completed"; break;
    case RunStatus::blowup_threshold: rep.status = "blowup-threshold"; break;
    case RunStatus::numerical_failure: rep.status = "numerical-failure"; break;
  }

  rep.m_trace = monitor_extrema(sim.trajectory);

  // which of the two Riccati scenarios did the run exhibit?
  const bool sup_diverged =
      sim.status == RunStatus::blowup_threshold &&
      !rep.m_trace.empty() && rep.m_trace.back().max_ux >= -rep.m_trace.back().m;
  if (sim.status == RunStatus::blowup_threshold)
    rep.scenario = sup_diverged ? "sup-slope-diverged" : "inf-slope-diverged";
  else
    rep.scenario = "no-blowup-within-horizon";

  if (rep.criterion.met && !(sim.status == RunStatus::blowup_threshold && !sup_diverged)) {
    rep.sign_note =
        "criterion u0_x(x0) < -sqrt(2)B was met, but the associated comparison "
        "argument assumes m(0) >= sqrt(2)B and concludes m(t) -> +inf; the run " +
        std::string(sim.status == RunStatus::blowup_threshold
                        ? "diverged in sup u_x, not in inf u_x"
                        : "saw inf u_x relax toward -sqrt(2)B with no divergence") +
        ". The run exhibits the sign ambiguity between the criterion (about "
        "inf u_x) and the divergence scenario (about +inf).";
  }
  return rep;
}

}  // namespace bfam
