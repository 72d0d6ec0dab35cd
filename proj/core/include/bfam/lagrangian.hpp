#pragma once

#include <vector>

#include "bfam/dynamics.hpp"
#include "bfam/grid.hpp"

namespace bfam {

/// Raised when the evolved Jacobian y_xi drops to zero or below: the flow
/// map stopped being an increasing diffeomorphism.
struct DiffeomorphismLoss : std::runtime_error {
  double t;
  explicit DiffeomorphismLoss(double when)
      : std::runtime_error("flow Jacobian lost positivity at t = " + std::to_string(when)),
        t(when) {}
};

struct SingularJacobian : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Characteristic ensemble for dy/dt = u(t, -k3 y), y(0, xi) = xi, carrying
/// the flow positions, the Jacobian (advanced by its own ODE
/// d(y_xi)/dt = -k3 u_x(t,-k3 y) y_xi), and the transported samples
/// U = u(t,-k3 y), V = rho(t,-k3 y). All matrices are time-major and share
/// the trajectory's snapshot times.
struct CharacteristicEnsemble {
  double k3 = 1;
  std::vector<double> times;
  std::vector<double> xi;
  std::vector<std::vector<double>> y, y_xi, U, V;
  std::vector<std::vector<double>> ux_at;  // u_x(t, -k3 y): the Jacobian ODE coefficient
  /// U_xi = -k3 * ux_at * y_xi (chain rule) at (time, label).
  double u_xi(size_t ti, size_t li) const {
    return -k3 * ux_at[ti][li] * y_xi[ti][li];
  }
};

/// Integrate the characteristics through a recorded trajectory. Spatial
/// evaluation is trigonometric interpolation; temporal evaluation between
/// snapshots is 4-point (cubic) interpolation of the spectra. Throws
/// DiffeomorphismLoss if y_xi <= 0 is detected.
CharacteristicEnsemble evolve_characteristics(const Trajectory& traj, double k3,
                                              const std::vector<double>& xi0, double T);

/// Jacobian by the exponential formula exp(int_0^t -k3 u_x(s,-k3 y) ds),
/// integrating the recorded coefficient in time; independent cross-check of
/// the ODE-advanced y_xi. Time-major like the ensemble.
std::vector<std::vector<double>> jacobian_exponential(const CharacteristicEnsemble& ens);

struct DensityInvariantReport {
  double max_error = 0;
  std::vector<double> per_time;
};

/// Checks rho(t, -k3 y) y_xi = rho0(-k3 xi) over the whole ensemble.
DensityInvariantReport verify_density_invariant(const CharacteristicEnsemble& ens,
                                                const Field& rho0);

/// The nonlocal Lagrangian force at one recorded time (k3 = 1 setting):
///   F(xi) = -1/2 int sign(y(eta)-y(xi)) e^{-|y(xi)-y(eta)|} g(eta) deta,
///   g = k2/2 V^2 y_eta + k1/2 U^2 y_eta + (3-k1)/2 U_eta^2 / y_eta,
/// with the kernel periodized like the Helmholtz Green's function.
std::vector<double> tilde_F(const CharacteristicEnsemble& ens, size_t time_index,
                            const Params& params, const Grid& grid);

/// d/dxi of tilde_F: the local term g(xi) minus y_xi(xi) times the smooth
/// kernel convolution of g.
std::vector<double> tilde_F_xi(const CharacteristicEnsemble& ens, size_t time_index,
                               const Params& params, const Grid& grid);

struct IntegralIdentityReport {
  double max_err_y = 0;     // y(t,xi) vs xi + int_0^t U dtau
  double max_err_y_xi = 0;  // y_xi vs 1 + int_0^t U_xi dtau
};

/// Verifies the integral forms of the flow ODEs by time quadrature of the
/// recorded U and U_xi.
IntegralIdentityReport check_integral_identities(const CharacteristicEnsemble& ens);

/// Monotone labels: sign(y(xi)-y(eta)) = sign(xi-eta) within the cell.
bool labels_monotone(const CharacteristicEnsemble& ens);

/// Cumulative integral of samples (t_i, v_i) by piecewise cubic quadrature;
/// shared by the identity checks and the exponential Jacobian.
std::vector<double> cumulative_integral(const std::vector<double>& t,
                                        const std::vector<double>& v);

}  // namespace bfam
