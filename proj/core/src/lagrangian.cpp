#include "bfam/lagrangian.hpp"

#include <algorithm>
#include <cmath>

#include "bfam/helmholtz.hpp"

namespace bfam {

namespace {

double lagrange_value(const std::vector<double>& t, const std::vector<double>& v,
                      int base, int count, double at) {
  double acc = 0.0;
  for (int m = 0; m < count; ++m) {
    double w = 1.0;
    for (int l = 0; l < count; ++l)
      if (l != m)
        w *= (at - t[static_cast<size_t>(base + l)]) /
             (t[static_cast<size_t>(base + m)] - t[static_cast<size_t>(base + l)]);
    acc += w * v[static_cast<size_t>(base + m)];
  }
  return acc;
}

}  // namespace

std::vector<double> cumulative_integral(const std::vector<double>& t,
                                        const std::vector<double>& v) {
  const int n = static_cast<int>(t.size());
  std::vector<double> out(static_cast<size_t>(n), 0.0);
  if (n < 2) return out;
  const int count = std::min(n, 4);
  // two-point Gauss on the local Lagrange cubic: exact for the interpolant
  const double gl = 0.5 / std::sqrt(3.0);
  for (int j = 0; j + 1 < n; ++j) {
    const int base = std::clamp(j - 1, 0, n - count);
    const double a = t[static_cast<size_t>(j)];
    const double b = t[static_cast<size_t>(j + 1)];
    const double mid = 0.5 * (a + b), half = b - a;
    const double f1 = lagrange_value(t, v, base, count, mid - gl * half);
    const double f2 = lagrange_value(t, v, base, count, mid + gl * half);
    out[static_cast<size_t>(j + 1)] =
        out[static_cast<size_t>(j)] + 0.5 * half * (f1 + f2);
  }
  return out;
}

namespace {

// spectra of a trajectory's u and u_x, one slice per snapshot
struct SpectralTrajectory {
  double length = 0;
  std::vector<double> times;
  std::vector<std::vector<std::complex<double>>> u, ux;

  explicit SpectralTrajectory(const Trajectory& traj) {
    const Grid& g = traj.states.front().u.grid();
    length = g.length();
    times = traj.times;
    u.reserve(traj.states.size());
    ux.reserve(traj.states.size());
    for (const auto& s : traj.states) {
      u.push_back(g.spectrum(s.u));
      ux.push_back(g.spectrum(derivative(s.u)));
    }
  }

  // blended interpolant at arbitrary time (4-point Lagrange over snapshots)
  TrigInterpolant slice(const std::vector<std::vector<std::complex<double>>>& src,
                        double at) const {
    const int n = static_cast<int>(times.size());
    const int count = std::min(n, 4);
    int j = static_cast<int>(std::upper_bound(times.begin(), times.end(), at) -
                             times.begin()) - 1;
    j = std::clamp(j, 0, n - 2);
    const int base = std::clamp(j - 1, 0, n - count);
    std::vector<std::complex<double>> c(src.front().size(), 0.0);
    for (int m = 0; m < count; ++m) {
      double w = 1.0;
      for (int l = 0; l < count; ++l)
        if (l != m)
          w *= (at - times[static_cast<size_t>(base + l)]) /
               (times[static_cast<size_t>(base + m)] - times[static_cast<size_t>(base + l)]);
      const auto& s = src[static_cast<size_t>(base + m)];
      for (size_t k = 0; k < c.size(); ++k) c[k] += w * s[k];
    }
    return TrigInterpolant(length, std::move(c));
  }
};

}  // namespace

CharacteristicEnsemble evolve_characteristics(const Trajectory& traj, double k3,
                                              const std::vector<double>& xi0, double T) {
  if (traj.states.size() < 2)
    throw std::invalid_argument("evolve_characteristics: need at least two snapshots");
  const SpectralTrajectory spec(traj);

  CharacteristicEnsemble ens;
  ens.k3 = k3;
  ens.xi = xi0;
  const size_t m = xi0.size();

  std::vector<double> y = xi0, yx(m, 1.0);

  auto record = [&](double t, const TrigInterpolant& ut, const TrigInterpolant& uxt,
                    const Field& rho) {
    ens.times.push_back(t);
    ens.y.push_back(y);
    ens.y_xi.push_back(yx);
    TrigInterpolant rhot(rho);
    std::vector<double> urow(m), vrow(m), axrow(m);
    for (size_t i = 0; i < m; ++i) {
      const double pos = -k3 * y[i];
      urow[i] = ut(pos);
      vrow[i] = rhot(pos);
      axrow[i] = uxt(pos);
    }
    ens.U.push_back(std::move(urow));
    ens.V.push_back(std::move(vrow));
    ens.ux_at.push_back(std::move(axrow));
    for (size_t i = 0; i < m; ++i)
      if (!(yx[i] > 0.0)) throw DiffeomorphismLoss(t);
  };

  record(traj.times.front(), spec.slice(spec.u, traj.times.front()),
         spec.slice(spec.ux, traj.times.front()), traj.states.front().rho);

  for (size_t s = 0; s + 1 < traj.times.size(); ++s) {
    const double t0 = traj.times[s];
    if (t0 >= T - 1e-14 * std::max(1.0, T)) break;
    const double t1 = traj.times[s + 1];
    const double h = t1 - t0;

    const TrigInterpolant u0 = spec.slice(spec.u, t0);
    const TrigInterpolant uh = spec.slice(spec.u, t0 + h / 2);
    const TrigInterpolant u1 = spec.slice(spec.u, t1);
    const TrigInterpolant x0 = spec.slice(spec.ux, t0);
    const TrigInterpolant xh = spec.slice(spec.ux, t0 + h / 2);
    const TrigInterpolant x1 = spec.slice(spec.ux, t1);

    for (size_t i = 0; i < m; ++i) {
      // coupled RK4 for (y, y_xi); stages share the interpolated slices
      auto f = [&](const TrigInterpolant& ut, const TrigInterpolant& uxt, double yy,
                   double jj, double& dy, double& dj) {
        const double pos = -k3 * yy;
        dy = ut(pos);
        dj = -k3 * uxt(pos) * jj;
      };
      double dy1, dj1, dy2, dj2, dy3, dj3, dy4, dj4;
      f(u0, x0, y[i], yx[i], dy1, dj1);
      f(uh, xh, y[i] + (h / 2) * dy1, yx[i] + (h / 2) * dj1, dy2, dj2);
      f(uh, xh, y[i] + (h / 2) * dy2, yx[i] + (h / 2) * dj2, dy3, dj3);
      f(u1, x1, y[i] + h * dy3, yx[i] + h * dj3, dy4, dj4);
      y[i] += (h / 6) * (dy1 + 2 * dy2 + 2 * dy3 + dy4);
      yx[i] += (h / 6) * (dj1 + 2 * dj2 + 2 * dj3 + dj4);
    }
    record(t1, u1, x1, traj.states[s + 1].rho);
  }
  return ens;
}

std::vector<std::vector<double>> jacobian_exponential(const CharacteristicEnsemble& ens) {
  const size_t nt = ens.times.size();
  const size_t m = ens.xi.size();
  std::vector<std::vector<double>> out(nt, std::vector<double>(m));
  std::vector<double> integrand(nt);
  for (size_t i = 0; i < m; ++i) {
    for (size_t ti = 0; ti < nt; ++ti) integrand[ti] = -ens.k3 * ens.ux_at[ti][i];
    const auto acc = cumulative_integral(ens.times, integrand);
    for (size_t ti = 0; ti < nt; ++ti) out[ti][i] = std::exp(acc[ti]);
  }
  return out;
}

DensityInvariantReport verify_density_invariant(const CharacteristicEnsemble& ens,
                                                const Field& rho0) {
  const TrigInterpolant r0(rho0);
  DensityInvariantReport rep;
  rep.per_time.resize(ens.times.size(), 0.0);
  for (size_t ti = 0; ti < ens.times.size(); ++ti) {
    double worst = 0.0;
    for (size_t i = 0; i < ens.xi.size(); ++i) {
      const double lhs = ens.V[ti][i] * ens.y_xi[ti][i];
      const double rhs = r0(-ens.k3 * ens.xi[i]);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    rep.per_time[ti] = worst;
    rep.max_error = std::max(rep.max_error, worst);
  }
  return rep;
}

namespace {

std::vector<double> lagrangian_source(const CharacteristicEnsemble& ens, size_t ti,
                                      const Params& params) {
  const size_t m = ens.xi.size();
  std::vector<double> g(m);
  for (size_t i = 0; i < m; ++i) {
    const double yx = ens.y_xi[ti][i];
    if (yx < 1e-6)
      throw SingularJacobian("tilde_F: Jacobian below floor at label " + std::to_string(i));
    const double u = ens.U[ti][i];
    const double v = ens.V[ti][i];
    const double uxi = ens.u_xi(ti, i);
    g[i] = 0.5 * params.k2 * v * v * yx + 0.5 * params.k1 * u * u * yx +
           0.5 * (3.0 - params.k1) * uxi * uxi / yx;
  }
  return g;
}

double label_spacing(const CharacteristicEnsemble& ens) {
  return (ens.xi.back() - ens.xi.front()) / static_cast<double>(ens.xi.size() - 1);
}

}  // namespace

std::vector<double> tilde_F(const CharacteristicEnsemble& ens, size_t time_index,
                            const Params& params, const Grid& grid) {
  if (ens.k3 != 1.0)
    throw std::invalid_argument("tilde_F: defined in the k3 = 1 setting");
  const auto g = lagrangian_source(ens, time_index, params);
  const HelmholtzOperator op(grid);
  const size_t m = ens.xi.size();
  const double de = label_spacing(ens);
  const auto& y = ens.y[time_index];
  std::vector<double> out(m, 0.0);
  for (size_t i = 0; i < m; ++i) {
    double acc = 0.0;
    for (size_t j = 0; j < m; ++j)
      acc += op.signed_kernel_at(y[j] - y[i]) * g[j];
    out[i] = de * acc;
  }
  return out;
}

std::vector<double> tilde_F_xi(const CharacteristicEnsemble& ens, size_t time_index,
                               const Params& params, const Grid& grid) {
  if (ens.k3 != 1.0)
    throw std::invalid_argument("tilde_F_xi: defined in the k3 = 1 setting");
  const auto g = lagrangian_source(ens, time_index, params);
  const HelmholtzOperator op(grid);
  const size_t m = ens.xi.size();
  const double de = label_spacing(ens);
  const auto& y = ens.y[time_index];
  std::vector<double> out(m, 0.0);
  for (size_t i = 0; i < m; ++i) {
    double acc = 0.0;
    for (size_t j = 0; j < m; ++j)
      acc += op.kernel_at(y[j] - y[i]) * g[j];
    out[i] = g[i] - ens.y_xi[time_index][i] * de * acc;
  }
  return out;
}

IntegralIdentityReport check_integral_identities(const CharacteristicEnsemble& ens) {
  IntegralIdentityReport rep;
  const size_t nt = ens.times.size();
  const size_t m = ens.xi.size();
  std::vector<double> series(nt);
  for (size_t i = 0; i < m; ++i) {
    for (size_t ti = 0; ti < nt; ++ti) series[ti] = ens.U[ti][i];
    const auto iu = cumulative_integral(ens.times, series);
    for (size_t ti = 0; ti < nt; ++ti)
      rep.max_err_y = std::max(rep.max_err_y,
                               std::abs(ens.y[ti][i] - (ens.xi[i] + iu[ti])));
    for (size_t ti = 0; ti < nt; ++ti) series[ti] = ens.u_xi(ti, i);
    const auto ix = cumulative_integral(ens.times, series);
    for (size_t ti = 0; ti < nt; ++ti)
      rep.max_err_y_xi = std::max(rep.max_err_y_xi,
                                  std::abs(ens.y_xi[ti][i] - (1.0 + ix[ti])));
  }
  return rep;
}

bool labels_monotone(const CharacteristicEnsemble& ens) {
  for (size_t ti = 0; ti < ens.times.size(); ++ti)
    for (size_t i = 0; i + 1 < ens.xi.size(); ++i)
      if (!(ens.y[ti][i] < ens.y[ti][i + 1])) return false;
  return true;
}

}  // namespace bfam
