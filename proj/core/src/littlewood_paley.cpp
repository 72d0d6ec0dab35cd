#include "bfam/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bfam {

namespace {
// smooth step: 0 for t <= 0, 1 for t >= 1
double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}
}  // namespace

double DyadicPartition::chi_function(double t) {
  return 1.0 - smooth_step((std::abs(t) - 1.0) * 3.0);  // transition on [1, 4/3]
}

double DyadicPartition::phi_function(double t) {
  return chi_function(t / 2.0) - chi_function(t);
}

DyadicPartition::DyadicPartition(Grid grid) : grid_(std::move(grid)) {
  const auto& xi = grid_.bin_wavenumbers();
  chi_.resize(xi.size());
  for (size_t k = 0; k < xi.size(); ++k) chi_[k] = chi_function(xi[k]);

  // keep every block that is nonzero at some discrete wavenumber
  for (int j = 0;; ++j) {
    std::vector<double> p(xi.size());
    bool nonzero = false;
    const double scale = std::ldexp(1.0, -j);  // 2^{-j}
    for (size_t k = 0; k < xi.size(); ++k) {
      p[k] = phi_function(xi[k] * scale);
      if (p[k] != 0.0) nonzero = true;
    }
    if (!nonzero) break;
    phi_.push_back(std::move(p));
  }
  j_max_ = static_cast<int>(phi_.size()) - 1;
}

const std::vector<double>& DyadicPartition::phi(int j) const {
  if (j < 0 || j > j_max_) throw std::out_of_range("DyadicPartition::phi: block index");
  return phi_[static_cast<size_t>(j)];
}

std::vector<double> DyadicPartition::lowpass_multiplier(int j) const {
  const auto& xi = grid_.bin_wavenumbers();
  std::vector<double> m(xi.size());
  const double scale = std::ldexp(1.0, -j);
  for (size_t k = 0; k < xi.size(); ++k) m[k] = chi_function(xi[k] * scale);
  return m;
}

DyadicPartition build_partition(const Grid& grid) { return DyadicPartition(grid); }

Field lp_block(const Field& f, int j, const DyadicPartition& part) {
  if (!f.grid().same_grid(part.grid())) throw GridMismatch("lp_block: grid mismatch");
  if (j <= -2 || j > part.j_max()) return Field(f.grid());
  if (j == -1) return f.grid().apply_multiplier(f, part.chi());
  return f.grid().apply_multiplier(f, part.phi(j));
}

Field lowpass_sj(const Field& f, int j, const DyadicPartition& part) {
  if (!f.grid().same_grid(part.grid())) throw GridMismatch("lowpass_sj: grid mismatch");
  if (j <= -1) return Field(f.grid());
  return f.grid().apply_multiplier(f, part.lowpass_multiplier(j));
}

double besov_norm(const Field& f, const BesovSpec& spec, const DyadicPartition& part) {
  if (spec.p < 1.0 || spec.r < 1.0)
    throw std::invalid_argument("besov_norm: p and r must be >= 1");
  const bool r_inf = std::isinf(spec.r);
  double acc = 0.0;
  for (int j = -1; j <= part.j_max(); ++j) {
    const double block = lp_norm(lp_block(f, j, part), spec.p);
    const double w = std::pow(2.0, j * spec.s) * block;
    if (r_inf)
      acc = std::max(acc, w);
    else
      acc += std::pow(w, spec.r);
  }
  return r_inf ? acc : std::pow(acc, 1.0 / spec.r);
}

double sobolev_norm(const Field& f, double s) {
  const Grid& g = f.grid();
  const auto c = g.spectrum(f);
  const auto& xi = g.bin_wavenumbers();
  double acc = 0.0;
  for (size_t k = 0; k < c.size(); ++k) {
    const double w = std::pow(1.0 + xi[k] * xi[k], s) * std::norm(c[k]);
    // interior bins carry their conjugate partners; DC and Nyquist appear once
    acc += (k == 0 || k + 1 == c.size()) ? w : 2.0 * w;
  }
  return std::sqrt(g.length() * acc);
}

InterpolationReport check_interpolation(const Field& f, double s1, double s2,
                                        double theta, double p, double r,
                                        const DyadicPartition& part) {
  if (!(s1 < s2)) throw std::invalid_argument("check_interpolation: need s1 < s2");
  if (!(theta > 0.0 && theta < 1.0))
    throw std::invalid_argument("check_interpolation: theta must be in (0,1)");
  InterpolationReport rep;
  const double smid = theta * s1 + (1.0 - theta) * s2;
  rep.lhs = besov_norm(f, {smid, p, r}, part);
  const double n1 = besov_norm(f, {s1, p, r}, part);
  const double n2 = besov_norm(f, {s2, p, r}, part);
  rep.rhs = std::pow(n1, theta) * std::pow(n2, 1.0 - theta);
  rep.violated = rep.lhs > rep.rhs * (1.0 + 1e-10);
  return rep;
}

}  // namespace bfam
