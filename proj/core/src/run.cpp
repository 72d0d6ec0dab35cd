#include "bfam/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "bfam/blowup.hpp"
#include "bfam/lagrangian.hpp"
#include "bfam/littlewood_paley.hpp"
#include "bfam/picard.hpp"

namespace bfam {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(fs::path(dir) / name);
  if (!out) throw std::runtime_error("cannot write to '" + dir + "/" + name + "'");
  return out;
}

void write_json(const std::string& dir, const std::string& name, const json& j) {
  auto out = open_out(dir, name);
  out << j.dump(2) << "\n";
}

json report_skeleton(const RunConfig& cfg, double wall_seconds) {
  json j;
  j["config"] = json::parse(config_to_json(cfg));
  j["wall_seconds"] = wall_seconds;
  return j;
}

void write_fields_csv(const std::string& dir, int index, const State& s) {
  char name[32];
  std::snprintf(name, sizeof(name), "fields_%04d.csv", index);
  auto out = open_out(dir, name);
  const Field ux = derivative(s.u);
  out << "x,u,rho,ux\n";
  for (int i = 0; i < s.u.size(); ++i)
    out << format_g17(s.u.grid().nodes()[static_cast<size_t>(i)]) << ','
        << format_g17(s.u[i]) << ',' << format_g17(s.rho[i]) << ','
        << format_g17(ux[i]) << '\n';
}

double boundary_magnitude(const State& s) {
  const int n = s.u.size();
  double m = 0;
  for (int i : {0, 1, n - 2, n - 1}) {
    m = std::max(m, std::abs(s.u[i]));
    m = std::max(m, std::abs(s.rho[i]));
  }
  return m;
}

struct Problem {
  Grid grid;
  Params params;
  State init;
};

Problem setup(const RunConfig& cfg) {
  Problem p;
  p.grid = make_grid(cfg.domain.length, cfg.domain.count);
  p.params = make_params(cfg.params);
  p.init.t = 0;
  p.init.u = initial_library(p.grid, cfg.init.u);
  p.init.rho = initial_library(p.grid, cfg.init.rho);
  return p;
}

SimControls controls_from(const RunConfig& cfg) {
  SimControls c;
  c.cfl_safety = cfg.time.cfl_safety;
  c.blowup_threshold = cfg.monitors.blowup_threshold;
  c.sample_every = cfg.time.sample_every;
  c.fixed_dt = cfg.time.fixed_dt;
  return c;
}

const char* status_name(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::blowup_threshold: return "blowup-threshold";
    case RunStatus::numerical_failure: return "numerical-failure";
  }
  return "unknown";
}

}  // namespace

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int run_simulate(const RunConfig& cfg, const std::string& out_dir, bool quiet) {
  const auto t0 = std::chrono::steady_clock::now();
  Problem p = setup(cfg);
  const SimulationResult res = simulate(p.init, p.params, cfg.time.horizon, controls_from(cfg));

  for (size_t i = 0; i < res.trajectory.states.size(); ++i)
    write_fields_csv(out_dir, static_cast<int>(i), res.trajectory.states[i]);

  {
    auto out = open_out(out_dir, "diagnostics.csv");
    out << "t,E1,E2,mass,min_ux,max_ux,u_inf\n";
    for (const auto& row : res.diagnostics)
      out << format_g17(row.t) << ',' << format_g17(row.e1) << ',' << format_g17(row.e2)
          << ',' << format_g17(row.mass) << ',' << format_g17(row.min_ux) << ','
          << format_g17(row.max_ux) << ',' << format_g17(row.u_inf) << '\n';
  }

  json rep = report_skeleton(cfg, seconds_since(t0));
  rep["status"] = status_name(res.status);
  rep["end_time"] = res.end_time;
  rep["snapshots"] = res.trajectory.states.size();
  rep["boundary_max"] = boundary_magnitude(res.trajectory.states.back());
  if (!std::isnan(res.crossing_time)) rep["crossing_time"] = res.crossing_time;
  if (!res.message.empty()) rep["message"] = res.message;
  write_json(out_dir, "report.json", rep);

  if (!quiet)
    std::cout << "simulate: " << status_name(res.status) << " at t = " << res.end_time
              << " (" << res.trajectory.states.size() << " snapshots)\n";
  if (res.status == RunStatus::numerical_failure)
    throw std::runtime_error("numerical failure: " + res.message);
  return res.status == RunStatus::blowup_threshold ? 2 : 0;
}

int run_picard(const RunConfig& cfg, const std::string& out_dir, bool quiet) {
  const auto t0 = std::chrono::steady_clock::now();
  Problem p = setup(cfg);
  PicardOptions opts;
  opts.mesh_steps = cfg.picard.mesh_steps;
  opts.p = cfg.besov.p;
  opts.cfl_safety = cfg.time.cfl_safety;
  const PicardResult res = picard_iterate(p.init.u, p.init.rho, p.params,
                                          cfg.picard.n_max, cfg.time.horizon, opts);
  const BoundCheckReport bound =
      uniform_bound_check(res, p.init.u, p.init.rho, cfg.time.horizon, opts.p);

  {
    auto out = open_out(out_dir, "picard_gaps.csv");
    out << "n,gap_u,gap_rho,sup_norm\n";
    for (const auto& rec : res.records)
      out << rec.n << ',' << format_g17(rec.gap_u) << ',' << format_g17(rec.gap_rho)
          << ',' << format_g17(rec.sup_norm) << '\n';
  }

  json rep = report_skeleton(cfg, seconds_since(t0));
  rep["iterations"] = res.records.size();
  rep["non_convergence"] = res.non_convergence;
  if (!res.message.empty()) rep["message"] = res.message;
  rep["initial_norm"] = bound.initial_norm;
  rep["fitted_C"] = bound.fitted_c;
  rep["envelope_valid"] = bound.envelope_valid;
  write_json(out_dir, "report.json", rep);

  if (!quiet)
    std::cout << "picard: " << res.records.size() << " iterations, "
              << (res.non_convergence ? "non-convergence reported" : "gaps recorded")
              << "\n";
  return 0;
}

int run_characteristics(const RunConfig& cfg, const std::string& out_dir, bool quiet) {
  const auto t0 = std::chrono::steady_clock::now();
  Problem p = setup(cfg);
  const SimulationResult sim =
      simulate(p.init, p.params, cfg.time.horizon, controls_from(cfg));
  if (sim.status == RunStatus::numerical_failure)
    throw std::runtime_error("numerical failure: " + sim.message);

  const CharacteristicEnsemble ens = evolve_characteristics(
      sim.trajectory, p.params.k3, p.grid.nodes(), cfg.time.horizon);
  const TrigInterpolant rho0(p.init.rho);

  {
    auto out = open_out(out_dir, "characteristics.csv");
    out << "t,xi,y,y_xi,U,V,invariant_error\n";
    for (size_t ti = 0; ti < ens.times.size(); ++ti)
      for (size_t i = 0; i < ens.xi.size(); ++i) {
        const double err =
            std::abs(ens.V[ti][i] * ens.y_xi[ti][i] - rho0(-ens.k3 * ens.xi[i]));
        out << format_g17(ens.times[ti]) << ',' << format_g17(ens.xi[i]) << ','
            << format_g17(ens.y[ti][i]) << ',' << format_g17(ens.y_xi[ti][i]) << ','
            << format_g17(ens.U[ti][i]) << ',' << format_g17(ens.V[ti][i]) << ','
            << format_g17(err) << '\n';
      }
  }

  const DensityInvariantReport inv = verify_density_invariant(ens, p.init.rho);
  const IntegralIdentityReport ids = check_integral_identities(ens);
  json rep = report_skeleton(cfg, seconds_since(t0));
  rep["status"] = status_name(sim.status);
  rep["density_invariant_max_error"] = inv.max_error;
  rep["integral_identity_err_y"] = ids.max_err_y;
  rep["integral_identity_err_y_xi"] = ids.max_err_y_xi;
  rep["labels_monotone"] = labels_monotone(ens);
  write_json(out_dir, "report.json", rep);

  if (!quiet)
    std::cout << "characteristics: " << ens.times.size() << " times, max invariant error "
              << inv.max_error << "\n";
  return sim.status == RunStatus::blowup_threshold ? 2 : 0;
}

namespace {

Field field_from_csv(const Grid& grid, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read field CSV '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty field CSV");
  // locate the u column in the header
  int u_col = 1;
  {
    std::stringstream hs(line);
    std::string name;
    for (int c = 0; std::getline(hs, name, ','); ++c)
      if (name == "u") u_col = c;
  }
  std::vector<double> vals;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::string cell;
    for (int c = 0; std::getline(ls, cell, ','); ++c)
      if (c == u_col) vals.push_back(std::stod(cell));
  }
  if (static_cast<int>(vals.size()) != grid.size())
    throw ConfigError("field CSV has " + std::to_string(vals.size()) +
                      " rows, domain.N is " + std::to_string(grid.size()));
  return Field(grid, std::move(vals));
}

}  // namespace

int run_besov(const RunConfig& cfg, const std::string& out_dir, bool quiet) {
  const auto t0 = std::chrono::steady_clock::now();
  const Grid grid = make_grid(cfg.domain.length, cfg.domain.count);
  const Field f = cfg.input_csv.empty() ? initial_library(grid, cfg.init.u)
                                        : field_from_csv(grid, cfg.input_csv);
  const DyadicPartition part(grid);
  const BesovSpec spec{cfg.besov.s, cfg.besov.p, cfg.besov.r};

  json norms;
  norms["besov"] = besov_norm(f, spec, part);
  norms["sobolev"] = sobolev_norm(f, cfg.besov.s);
  norms["l2"] = lp_norm(f, 2.0);
  norms["linf"] = lp_norm(f, std::numeric_limits<double>::infinity());
  json per_block = json::array();
  for (int j = -1; j <= part.j_max(); ++j)
    per_block.push_back(json{{"j", j}, {"linf", max_abs(lp_block(f, j, part))}});
  norms["blocks"] = per_block;
  norms["spec"] = {{"s", cfg.besov.s},
                   {"p", std::isinf(cfg.besov.p) ? json("inf") : json(cfg.besov.p)},
                   {"r", std::isinf(cfg.besov.r) ? json("inf") : json(cfg.besov.r)}};

  json rep = report_skeleton(cfg, seconds_since(t0));
  rep["norms"] = norms;
  write_json(out_dir, "norms.json", rep);
  if (!quiet) std::cout << norms.dump(2) << "\n";
  return 0;
}

int run_blowup(const RunConfig& cfg, const std::string& out_dir, bool quiet) {
  const auto t0 = std::chrono::steady_clock::now();
  Problem p = setup(cfg);
  const SimulationResult sim =
      simulate(p.init, p.params, cfg.time.horizon, controls_from(cfg));
  if (sim.status == RunStatus::numerical_failure)
    throw std::runtime_error("numerical failure: " + sim.message);

  const BlowupReport rep = build_blowup_report(p.init, p.params, sim, cfg.monitors.energy_n,
                                               cfg.blowup.m_bound, cfg.blowup.energy_squared);

  const double s2b = std::sqrt(2.0) * rep.b_const;
  {
    auto out = open_out(out_dir, "m_trace.csv");
    out << "t,m,xi_argmin,max_ux,u_inf,dm_dt,riccati_inf,riccati_sup\n";
    for (const auto& row : rep.m_trace) {
      const double ric_inf = std::abs(rep.m0) == s2b
                                 ? std::numeric_limits<double>::quiet_NaN()
                                 : riccati_solution(rep.m0, rep.b_const, row.t);
      const double ric_sup = rep.t0_bound && row.t < *rep.t0_bound
                                 ? riccati_solution(rep.sup_u0x, rep.b_const, row.t)
                                 : std::numeric_limits<double>::quiet_NaN();
      out << format_g17(row.t) << ',' << format_g17(row.m) << ','
          << format_g17(row.xi_argmin) << ',' << format_g17(row.max_ux) << ','
          << format_g17(row.u_inf) << ',' << format_g17(row.dm_dt) << ','
          << format_g17(ric_inf) << ',' << format_g17(ric_sup) << '\n';
    }
  }

  json j = report_skeleton(cfg, seconds_since(t0));
  j["E_n0"] = rep.en0;
  j["n"] = rep.n;
  j["M"] = rep.m_bound;
  j["M_supplied"] = rep.m_supplied;
  j["rho0_L1"] = rep.rho0_l1;
  j["B"] = rep.b_const;
  j["energy_squared"] = rep.energy_squared;
  j["criterion_met"] = rep.criterion.met;
  j["m0"] = rep.m0;
  j["sup_u0x"] = rep.sup_u0x;
  if (rep.criterion.met) j["witness_x0"] = rep.criterion.x0;
  if (rep.t0_bound) j["T0_bound"] = *rep.t0_bound;
  if (rep.observed_crossing) j["observed_crossing"] = *rep.observed_crossing;
  j["status"] = rep.status;
  j["scenario"] = rep.scenario;
  if (!rep.sign_note.empty()) j["sign_discrepancy"] = rep.sign_note;
  write_json(out_dir, "report.json", j);

  if (!quiet)
    std::cout << "blowup: B = " << rep.b_const << ", criterion "
              << (rep.criterion.met ? "met" : "not met") << ", " << rep.status << "\n";
  return sim.status == RunStatus::blowup_threshold ? 2 : 0;
}

}  // namespace bfam
