#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bfam/dynamics.hpp"
#include "bfam/grid.hpp"

namespace bfam {

/// Conserved energy E_n = int (2n rho^2 + u^2 + u_x^2) dx, n in {1, 2};
/// constant in time for the two distinguished parameter cases with k1 = 2.
double energy(const State& state, int n);

/// Threshold constant of the blow-up criterion, formula as printed:
///   B = 1/2 (E_n(0)^2 + k2 M ||rho0||_L1)^{1/2}.
/// energy_squared = false substitutes E_n(0) for E_n(0)^2 (the dimensionally
/// plausible variant), for side-by-side comparison.
double compute_B(double en0, double m_bound, double rho0_l1, double k2,
                 bool energy_squared = true);

struct CriterionResult {
  bool met = false;
  int node = -1;    // leftmost minimizing node of u0_x
  double x0 = std::numeric_limits<double>::quiet_NaN();
  double min_slope = 0;
};

/// The printed criterion: met iff min_x u0_x(x) < -sqrt(2) B (strict).
CriterionResult check_criterion(const Field& u0, double b_const);

struct UndefinedBound : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Blow-up horizon of the comparison equation m' = 1/2 m^2 - B^2 from
/// m(0) = m0 > sqrt(2) B:  T0 = -(1/(sqrt(2) B)) ln((m0-sqrt2 B)/(m0+sqrt2 B)).
double riccati_bound(double m0, double b_const);

/// Closed-form solution of the comparison equation at time t (any branch
/// with |m0| != sqrt(2) B); diverges at the riccati_bound horizon.
double riccati_solution(double m0, double b_const, double t);

struct ExtremaRow {
  double t = 0;
  double m = 0;         // inf_x u_x
  double xi_argmin = 0; // leftmost minimizing node
  double max_ux = 0;
  double u_inf = 0;
  double dm_dt = std::numeric_limits<double>::quiet_NaN();  // centered difference
};

/// Track inf/sup of u_x and ||u||_inf along a trajectory; dm_dt is the
/// discrete derivative of m(t) for comparison against 1/2 m^2 - B^2.
std::vector<ExtremaRow> monitor_extrema(const Trajectory& traj);

struct UinftyReport {
  double u_inf = 0;
  double bound = 0;  // (sqrt2/2) ||u||_{H^1}
  bool ok = false;
};

/// Checks ||u||_inf <= (sqrt2/2) ||u||_{H^1} (the peakon is the extremizer).
UinftyReport verify_uinfty_bound(const State& state);

/// Everything the blowup CLI reports for one run.
struct BlowupReport {
  int n = 1;
  double en0 = 0;
  double m_bound = 0;      // sup_t ||rho||_inf (measured unless supplied)
  bool m_supplied = false;
  double rho0_l1 = 0;
  double b_const = 0;
  bool energy_squared = true;
  CriterionResult criterion;
  double m0 = 0;           // inf u0_x
  double sup_u0x = 0;
  std::optional<double> t0_bound;  // from the sup branch, when sup_u0x > sqrt2 B
  std::optional<double> observed_crossing;
  std::string status;
  std::string scenario;
  std::string sign_note;   // set when the printed criterion and the observed
                           // behavior disagree (the paper's inf/sup ambiguity)
  std::vector<ExtremaRow> m_trace;
};

/// Assemble the report from a finished simulation. m_user < 0 means
/// "measure M from the run".
BlowupReport build_blowup_report(const State& init, const Params& params,
                                 const SimulationResult& sim, int n,
                                 double m_user = -1, bool energy_squared = true);

}  // namespace bfam
