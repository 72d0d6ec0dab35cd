#pragma once

#include <complex>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace bfam {

/// Thrown when an operation mixes fields living on different grids.
struct GridMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

class Field;

/// Uniform periodic grid on [-L/2, L/2) with nodes x_i = -L/2 + i*L/N and
/// wavenumbers xi_k = 2*pi*k/L, k = -N/2+1 .. N/2. Owns the FFT plans; all
/// spectral transforms of fields on this grid go through it. Immutable after
/// construction, cheap to copy (shared implementation).
class Grid {
 public:
  Grid() = default;

  double length() const;
  int size() const;
  double dx() const;
  const std::vector<double>& nodes() const;

  /// Full wavenumber set, ordered k = -N/2+1 .. N/2 (single Nyquist mode).
  std::vector<double> wavenumbers() const;
  /// Half-spectrum bin wavenumbers xi_k, k = 0 .. N/2.
  const std::vector<double>& bin_wavenumbers() const;
  int bins() const;  // N/2 + 1

  /// Half spectrum c_k = DFT_k / N taken relative to the left cell edge:
  /// f(x_j) = c_0 + sum_{k=1}^{N/2-1} 2 Re(c_k e^{i xi_k (x_j + L/2)})
  ///        + Re(c_{N/2}) cos(xi_{N/2} (x_j + L/2)).
  std::vector<std::complex<double>> spectrum(const Field& f) const;
  Field synthesize(std::span<const std::complex<double>> coeff) const;

  /// Multiply bin k by the real factor m[k] and transform back.
  Field apply_multiplier(const Field& f, std::span<const double> m) const;
  /// Multiply bin k by i*m[k] (odd multipliers: derivatives); the Nyquist
  /// bin is zeroed so real fields stay real.
  Field apply_odd_multiplier(const Field& f, std::span<const double> m) const;

  bool same_grid(const Grid& other) const;
  explicit operator bool() const { return static_cast<bool>(impl_); }

  friend Grid make_grid(double length, int count);

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

/// Build a grid. Rejects non-positive L, odd N and N < 8.
Grid make_grid(double length, int count);

/// Real samples of a function on a Grid. Values are plain doubles; the type
/// is a thin value wrapper so fields can be moved around and combined.
class Field {
 public:
  Field() = default;
  explicit Field(Grid grid);  // zero field
  Field(Grid grid, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  int size() const { return static_cast<int>(values_.size()); }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](int i) const { return values_[static_cast<size_t>(i)]; }
  double& operator[](int i) { return values_[static_cast<size_t>(i)]; }

  bool all_finite() const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

// Pointwise algebra. Mixing grids throws GridMismatch.
Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double s, const Field& a);
Field operator*(const Field& a, const Field& b);  // pointwise product
Field& operator+=(Field& a, const Field& b);
Field& operator-=(Field& a, const Field& b);

/// Spectral derivative: bin k -> i*xi_k * bin, Nyquist zeroed.
Field derivative(const Field& f);

/// Rectangle-rule integral dx * sum(values); spectrally accurate for smooth
/// periodic integrands.
double integrate(const Field& f);

double max_abs(const Field& f);
double min_value(const Field& f);
double max_value(const Field& f);
/// Leftmost node index attaining the minimum value.
int argmin_node(const Field& f);

/// 2/3-rule dealiasing: zero every bin with k > N/3.
Field dealias(const Field& f);

/// L^p norm by rectangle rule (node max for p = inf).
double lp_norm(const Field& f, double p);

/// Trigonometric interpolant of a field, evaluable at arbitrary x (periodic).
/// Exact at the nodes; the Nyquist mode is interpolated as a cosine.
class TrigInterpolant {
 public:
  TrigInterpolant() = default;
  explicit TrigInterpolant(const Field& f);
  /// From half-spectrum coefficients as returned by Grid::spectrum.
  TrigInterpolant(double length, std::vector<std::complex<double>> coeff);
  double operator()(double x) const;

 private:
  double length_ = 0;
  std::vector<std::complex<double>> coeff_;  // relative to left cell edge
};

/// Map x into [-L/2, L/2).
double wrap_periodic(double x, double length);

}  // namespace bfam
