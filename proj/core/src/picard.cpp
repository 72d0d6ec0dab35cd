#include "bfam/picard.hpp"

#include <algorithm>
#include <cmath>

namespace bfam {

namespace {

// value at t_j + theta*h from the cubic through mesh points j-1..j+2
// (clamped at the ends; linear when the mesh is too short)
Field interp_mesh(const std::vector<Field>& mesh, int j, double theta) {
  const int n = static_cast<int>(mesh.size());
  if (n < 4) {
    Field out = (1.0 - theta) * mesh[static_cast<size_t>(j)];
    out += theta * mesh[static_cast<size_t>(j + 1)];
    return out;
  }
  const int base = std::clamp(j - 1, 0, n - 4);
  const double s = (j - base) + theta;  // position in units of h from mesh[base]
  double w[4];
  for (int m = 0; m < 4; ++m) {
    w[m] = 1.0;
    for (int l = 0; l < 4; ++l)
      if (l != m) w[m] *= (s - l) / (m - l);
  }
  Field out = w[0] * mesh[static_cast<size_t>(base)];
  for (int m = 1; m < 4; ++m)
    out += w[m] * mesh[static_cast<size_t>(base + m)];
  return out;
}

Field transport_rhs(const Field& a, const Field& g, const Field& f) {
  return dealias(a * derivative(f)) + g;
}

}  // namespace

std::vector<Field> solve_linear_transport(const std::vector<Field>& a,
                                          const std::vector<Field>& g,
                                          const Field& f0, double T,
                                          double cfl_safety) {
  if (a.size() != g.size() || a.size() < 2)
    throw std::invalid_argument("solve_linear_transport: need matching meshes with >= 2 points");
  if (!(T > 0)) throw std::invalid_argument("solve_linear_transport: T must be positive");
  const int steps = static_cast<int>(a.size()) - 1;
  const double h = T / steps;

  double a_inf = 0;
  for (const auto& ai : a) a_inf = std::max(a_inf, max_abs(ai));
  if (h > cfl_safety * f0.grid().dx() / std::max(1.0, a_inf) * (1.0 + 1e-12))
    throw CflViolation("solve_linear_transport: mesh spacing exceeds the CFL bound");

  std::vector<Field> f;
  f.reserve(a.size());
  f.push_back(f0);
  for (int j = 0; j < steps; ++j) {
    const Field& aj = a[static_cast<size_t>(j)];
    const Field& gj = g[static_cast<size_t>(j)];
    const Field ah = interp_mesh(a, j, 0.5);
    const Field gh = interp_mesh(g, j, 0.5);
    const Field& a1 = a[static_cast<size_t>(j + 1)];
    const Field& g1 = g[static_cast<size_t>(j + 1)];

    const Field& fj = f.back();
    const Field k1 = transport_rhs(aj, gj, fj);
    const Field k2 = transport_rhs(ah, gh, fj + (h / 2) * k1);
    const Field k3 = transport_rhs(ah, gh, fj + (h / 2) * k2);
    const Field k4 = transport_rhs(a1, g1, fj + h * k3);
    f.push_back(fj + (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
  }
  return f;
}

namespace {

std::vector<Field> dx_helmholtz_mesh(const std::vector<Field>& src) {
  const Grid& grid = src.front().grid();
  const auto& xi = grid.bin_wavenumbers();
  std::vector<double> m(xi.size());
  for (size_t k = 0; k < xi.size(); ++k) m[k] = xi[k] / (1.0 + xi[k] * xi[k]);
  std::vector<Field> out;
  out.reserve(src.size());
  for (const auto& s : src) out.push_back(grid.apply_odd_multiplier(s, m));
  return out;
}

}  // namespace

PicardResult picard_iterate(const Field& u0, const Field& rho0, const Params& params,
                            int n_max, double T, const PicardOptions& opts) {
  if (!u0.grid().same_grid(rho0.grid()))
    throw GridMismatch("picard_iterate: u0 and rho0 grids differ");
  const Grid& grid = u0.grid();
  const DyadicPartition part(grid);
  const BesovSpec spec_u{1.0 + 1.0 / opts.p, opts.p, 1.0};
  const BesovSpec spec_r{1.0 / opts.p, opts.p, 1.0};

  int steps = opts.mesh_steps;
  if (steps <= 0) {
    // seed the shared mesh from the data scale; iterates hover near ||u0||
    const double scale = std::max(1.0, 2.0 * (max_abs(u0) + max_abs(rho0)));
    steps = static_cast<int>(std::ceil(T * scale / (opts.cfl_safety * grid.dx())));
    steps = std::max(steps, 8);
  }
  const double h = T / steps;

  PicardResult result;
  result.mesh_times.resize(static_cast<size_t>(steps + 1));
  for (int j = 0; j <= steps; ++j) result.mesh_times[static_cast<size_t>(j)] = j * h;

  const size_t mesh_n = static_cast<size_t>(steps + 1);
  std::vector<Field> u_prev(mesh_n, Field(grid)), rho_prev(mesh_n, Field(grid));

  int grow_streak = 0;
  double last_gap = std::numeric_limits<double>::infinity();
  for (int n = 0; n < n_max; ++n) {
    // sources from the frozen n-th iterate
    std::vector<Field> src, gsrc, a_u, a_rho;
    src.reserve(mesh_n);
    gsrc.reserve(mesh_n);
    a_u.reserve(mesh_n);
    a_rho.reserve(mesh_n);
    for (size_t j = 0; j < mesh_n; ++j) {
      const Field& un = u_prev[j];
      const Field& rn = rho_prev[j];
      const Field unx = derivative(un);
      src.push_back(dealias((0.5 * params.k2) * (rn * rn) +
                            (0.5 * params.k1) * (un * un) +
                            (0.5 * (3.0 - params.k1)) * (unx * unx)));
      gsrc.push_back(params.k3 * dealias(rn * unx));
      a_u.push_back(un);
      a_rho.push_back(params.k3 * un);
    }
    const std::vector<Field> f_src = dx_helmholtz_mesh(src);

    IterationRecord rec;
    rec.n = n + 1;
    try {
      rec.u = solve_linear_transport(a_u, f_src, lowpass_sj(u0, n + 1, part), T,
                                     opts.cfl_safety);
      rec.rho = solve_linear_transport(a_rho, gsrc, lowpass_sj(rho0, n + 1, part), T,
                                       opts.cfl_safety);
    } catch (const CflViolation& e) {
      result.non_convergence = true;
      result.message = std::string("iterate escaped the CFL budget: ") + e.what();
      break;
    }

    rec.gap_u = 0;
    rec.gap_rho = 0;
    rec.norm_t.resize(mesh_n);
    rec.sup_norm = 0;
    for (size_t j = 0; j < mesh_n; ++j) {
      rec.gap_u = std::max(rec.gap_u, besov_norm(rec.u[j] - u_prev[j], spec_u, part));
      rec.gap_rho = std::max(rec.gap_rho, besov_norm(rec.rho[j] - rho_prev[j], spec_r, part));
      rec.norm_t[j] = besov_norm(rec.u[j], spec_u, part) + besov_norm(rec.rho[j], spec_r, part);
      rec.sup_norm = std::max(rec.sup_norm, rec.norm_t[j]);
    }

    const double gap = rec.gap_u + rec.gap_rho;
    if (n >= 1 && gap > last_gap) {
      if (++grow_streak >= 3) {
        result.non_convergence = true;
        result.message = "Cauchy gap grew over 3 consecutive iterates";
      }
    } else {
      grow_streak = 0;
    }
    last_gap = gap;

    u_prev = rec.u;
    rho_prev = rec.rho;
    result.records.push_back(std::move(rec));
    if (result.non_convergence) break;
  }
  return result;
}

BoundCheckReport uniform_bound_check(const PicardResult& result, const Field& u0,
                                     const Field& rho0, double T, double p) {
  const DyadicPartition part(u0.grid());
  const BesovSpec spec_u{1.0 + 1.0 / p, p, 1.0};
  const BesovSpec spec_r{1.0 / p, p, 1.0};
  BoundCheckReport rep;
  rep.initial_norm = besov_norm(u0, spec_u, part) + besov_norm(rho0, spec_r, part);
  const double d = rep.initial_norm;

  const size_t mesh_n = result.mesh_times.size();
  rep.sup_over_n.assign(mesh_n, 0.0);
  for (const auto& rec : result.records)
    for (size_t j = 0; j < mesh_n; ++j)
      rep.sup_over_n[j] = std::max(rep.sup_over_n[j], rec.norm_t[j]);

  if (d == 0.0) {  // zero data: every norm is zero, any C works
    rep.fitted_c = 0.0;
    rep.envelope_valid = true;
    rep.envelope.assign(mesh_n, 0.0);
    return rep;
  }

  double c = 0.0;
  for (size_t j = 1; j < mesh_n; ++j) {
    const double s = rep.sup_over_n[j];
    const double t = result.mesh_times[j];
    if (s <= 2.0 * d) continue;
    const double need = (1.0 - std::pow(2.0 * d / s, 2)) / (8.0 * d * d * t);
    c = std::max(c, need);
  }
  rep.fitted_c = c;
  rep.envelope_valid = 8.0 * c * d * d * T < 1.0;
  rep.envelope.resize(mesh_n);
  for (size_t j = 0; j < mesh_n; ++j) {
    const double den = 1.0 - 8.0 * c * d * d * result.mesh_times[j];
    rep.envelope[j] = den > 0 ? 2.0 * d / std::sqrt(den)
                              : std::numeric_limits<double>::infinity();
  }
  return rep;
}

}  // namespace bfam
