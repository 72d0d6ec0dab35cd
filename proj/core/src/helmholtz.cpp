#include "bfam/helmholtz.hpp"

#include <cmath>

namespace bfam {

HelmholtzOperator::HelmholtzOperator(Grid grid) : grid_(std::move(grid)) {
  const auto& xi = grid_.bin_wavenumbers();
  inv_.resize(xi.size());
  dxm_.resize(xi.size());
  for (size_t k = 0; k < xi.size(); ++k) {
    inv_[k] = 1.0 / (1.0 + xi[k] * xi[k]);
    dxm_[k] = xi[k] / (1.0 + xi[k] * xi[k]);
  }
  kernel_.resize(static_cast<size_t>(grid_.size()));
  for (int i = 0; i < grid_.size(); ++i)
    kernel_[static_cast<size_t>(i)] = kernel_at(grid_.nodes()[static_cast<size_t>(i)]);
}

double HelmholtzOperator::kernel_at(double x) const {
  const double L = grid_.length();
  const double d = std::abs(wrap_periodic(x, L));
  return (std::exp(-d) + std::exp(d - L)) / (2.0 * (1.0 - std::exp(-L)));
}

double HelmholtzOperator::signed_kernel_at(double x) const {
  const double L = grid_.length();
  const double w = wrap_periodic(x, L);
  if (w == 0.0) return 0.0;
  const double d = std::abs(w);
  const double v = -(std::exp(-d) - std::exp(d - L)) / (2.0 * (1.0 - std::exp(-L)));
  return w > 0 ? v : -v;
}

Field helmholtz_inv(const HelmholtzOperator& op, const Field& f) {
  return op.grid().apply_multiplier(f, op.inverse_multiplier());
}

Field dx_helmholtz_inv(const HelmholtzOperator& op, const Field& f) {
  return op.grid().apply_odd_multiplier(f, op.dx_multiplier());
}

namespace {
Field circulant_convolve(const HelmholtzOperator& op, const Field& f, bool signed_kernel) {
  if (!f.grid().same_grid(op.grid())) throw GridMismatch("kernel_convolve: grid mismatch");
  const Grid& g = op.grid();
  const int n = g.size();
  const double dx = g.dx();
  // kernel row by node displacement, d = i - j mod N
  std::vector<double> row(static_cast<size_t>(n));
  for (int d = 0; d < n; ++d) {
    const double x = d * dx;
    row[static_cast<size_t>(d)] = signed_kernel ? op.signed_kernel_at(x) : op.kernel_at(x);
  }
  Field out(g);
  const auto& v = f.values();
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      int d = i - j;
      if (d < 0) d += n;
      acc += row[static_cast<size_t>(d)] * v[static_cast<size_t>(j)];
    }
    out[i] = dx * acc;
  }
  return out;
}
}  // namespace

Field kernel_convolve(const HelmholtzOperator& op, const Field& f) {
  return circulant_convolve(op, f, false);
}

Field signed_kernel_convolve(const HelmholtzOperator& op, const Field& f) {
  return circulant_convolve(op, f, true);
}

}  // namespace bfam
