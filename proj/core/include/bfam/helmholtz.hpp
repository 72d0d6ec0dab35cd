#pragma once

#include <vector>

#include "bfam/grid.hpp"

namespace bfam {

/// The nonlocal operators of the reformulated system: P*f = (1-d_xx)^{-1} f
/// with P = (1/2) e^{-|x|}, realized on the periodic cell. The spectral
/// multipliers are the production path; the periodized Green's function
/// G_L(x) = cosh(|x|-L/2) / (2 sinh(L/2)) backs the O(N^2) quadrature oracle.
class HelmholtzOperator {
 public:
  explicit HelmholtzOperator(Grid grid);

  const Grid& grid() const { return grid_; }
  /// 1/(1+xi_k^2) per bin; in (0,1], equal to 1 only at xi=0.
  const std::vector<double>& inverse_multiplier() const { return inv_; }
  /// xi_k/(1+xi_k^2) per bin (the imaginary part of i xi/(1+xi^2)).
  const std::vector<double>& dx_multiplier() const { return dxm_; }
  /// G_L sampled at the grid nodes.
  const std::vector<double>& periodized_kernel() const { return kernel_; }

  /// G_L(x), stable for any L: (e^{-|x|} + e^{|x|-L}) / (2 (1 - e^{-L})).
  double kernel_at(double x) const;
  /// d/dx G_L(x); the jump at x = 0 is resolved as 0 (principal value).
  double signed_kernel_at(double x) const;

 private:
  Grid grid_;
  std::vector<double> inv_, dxm_, kernel_;
};

/// Spectral application of (1 - d_xx)^{-1}.
Field helmholtz_inv(const HelmholtzOperator& op, const Field& f);
/// Spectral application of d_x (1 - d_xx)^{-1}.
Field dx_helmholtz_inv(const HelmholtzOperator& op, const Field& f);

/// Quadrature convolution with the periodized kernel; O(N^2) oracle for
/// helmholtz_inv.
Field kernel_convolve(const HelmholtzOperator& op, const Field& f);
/// Quadrature convolution with the signed kernel d_x G_L; oracle for
/// dx_helmholtz_inv.
Field signed_kernel_convolve(const HelmholtzOperator& op, const Field& f);

}  // namespace bfam
