#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "bfam/grid.hpp"

namespace bfam {

/// The (k1, k2, k3) triple of the two-component b-family system.
struct Params {
  double k1 = 2, k2 = 4, k3 = 1;
  /// case (i): k1 = b, k2 = 2b, k3 = 1.
  static Params case_i(double b) { return {b, 2 * b, 1}; }
  /// case (ii): k1 = b+1, k2 = 2, k3 = b.
  static Params case_ii(double b) { return {b + 1, 2, b}; }
};

/// Snapshot of the evolved pair (u, rho) at time t; m = u - u_xx is derived.
struct State {
  double t = 0;
  Field u;
  Field rho;
};

/// Raised when an evaluation produces non-finite values; carries the time.
struct BlowupSuspected : std::runtime_error {
  double t;
  explicit BlowupSuspected(double when)
      : std::runtime_error("non-finite values at t = " + std::to_string(when)), t(when) {}
};

struct CflViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Right-hand side of the nonlocal reformulation:
///   du/dt  = u u_x + d_x P * (k2/2 rho^2 + k1/2 u^2 + (3-k1)/2 u_x^2)
///   drho/dt = k3 d_x(u rho)   (conservation form)
/// Quadratic products are 2/3-rule dealiased.
std::pair<Field, Field> rhs(const State& state, const Params& params);

/// Momentum-form right-hand side dm/dt = u m_x + k1 m u_x + k2 rho rho_x
/// with m = u - u_xx; cross-check for rhs via (1 - d_xx).
Field rhs_momentum(const State& state, const Params& params);

/// Classical RK4 step. Throws CflViolation if dt exceeds
/// cfl_safety * dx / max(1, ||u||_inf).
State step_rk4(const State& state, double dt, const Params& params,
               double cfl_safety = 0.3);

enum class RunStatus { completed, blowup_threshold, numerical_failure };

struct SimControls {
  double cfl_safety = 0.3;
  double blowup_threshold = 1e3;  // on ||u_x||_inf
  int sample_every = 1;           // snapshot cadence in steps
  double fixed_dt = 0;            // 0 = adaptive from the CFL bound
  int max_steps = 50'000'000;
};

struct DiagnosticsRow {
  double t, e1, e2, mass, min_ux, max_ux, u_inf;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
};

struct SimulationResult {
  RunStatus status = RunStatus::completed;
  Trajectory trajectory;  // snapshots, always including t=0 and the last state
  std::vector<DiagnosticsRow> diagnostics;
  double end_time = 0;
  double crossing_time = std::numeric_limits<double>::quiet_NaN();
  std::string message;
};

SimulationResult simulate(const State& init, const Params& params, double T,
                          const SimControls& controls = {});

/// Initial-data profiles. kind is one of gaussian | peakon | sine | bump |
/// steep_front; unknown kinds are rejected.
struct ProfileSpec {
  std::string kind = "gaussian";
  double amplitude = 1.0;
  double center = 0.0;
  double width = 1.0;
  double slope = -1.0;    // steep_front: prescribed minimum slope
  double envelope = 0.0;  // steep_front: envelope width (0 = 10*width)
  int mode = 1;           // sine: integer wavenumber index
};

Field initial_library(const Grid& grid, const ProfileSpec& spec);

}  // namespace bfam
