#include "bfam/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

namespace bfam {

namespace {
// FFTW plan creation is not thread-safe; execution on distinct arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  double* re = nullptr;
  fftw_complex* cx = nullptr;
  int n = 0;
  explicit FftwBuffer(int size) : n(size) {
    re = fftw_alloc_real(static_cast<size_t>(n));
    cx = fftw_alloc_complex(static_cast<size_t>(n) / 2 + 1);
  }
  ~FftwBuffer() {
    fftw_free(re);
    fftw_free(cx);
  }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
};

// per-thread scratch, reused across calls (transform sizes recur constantly)
FftwBuffer& scratch(int n) {
  thread_local std::vector<std::unique_ptr<FftwBuffer>> pool;
  for (auto& b : pool)
    if (b->n == n) return *b;
  if (pool.size() >= 8) pool.erase(pool.begin());
  pool.push_back(std::make_unique<FftwBuffer>(n));
  return *pool.back();
}
}  // namespace

struct Grid::Impl {
  double length = 0;
  int n = 0;
  double dx = 0;
  std::vector<double> nodes;
  std::vector<double> xi;  // bins 0..N/2
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;

  Impl(double L, int N) : length(L), n(N), dx(L / N) {
    nodes.resize(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i) nodes[static_cast<size_t>(i)] = -L / 2 + i * dx;
    xi.resize(static_cast<size_t>(N / 2 + 1));
    for (int k = 0; k <= N / 2; ++k)
      xi[static_cast<size_t>(k)] = 2.0 * std::numbers::pi * k / L;

    std::lock_guard<std::mutex> lock(planner_mutex());
    FftwBuffer buf(N);
    fwd = fftw_plan_dft_r2c_1d(N, buf.re, buf.cx, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(N, buf.cx, buf.re, FFTW_ESTIMATE);
  }
  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
  }

  void forward(const double* in, std::complex<double>* out) const {
    FftwBuffer& buf = scratch(n);
    std::copy(in, in + n, buf.re);
    fftw_execute_dft_r2c(fwd, buf.re, buf.cx);
    const double scale = 1.0 / n;
    for (int k = 0; k <= n / 2; ++k)
      out[k] = scale * std::complex<double>(buf.cx[k][0], buf.cx[k][1]);
  }

  void backward(const std::complex<double>* in, double* out) const {
    FftwBuffer& buf = scratch(n);
    for (int k = 0; k <= n / 2; ++k) {
      buf.cx[k][0] = in[k].real();
      buf.cx[k][1] = in[k].imag();
    }
    fftw_execute_dft_c2r(inv, buf.cx, buf.re);
    std::copy(buf.re, buf.re + n, out);
  }
};

Grid make_grid(double length, int count) {
  if (!(length > 0)) throw std::invalid_argument("grid length must be positive");
  if (count % 2 != 0) throw std::invalid_argument("N must be even");
  if (count < 8) throw std::invalid_argument("N must be at least 8");
  Grid g;
  g.impl_ = std::make_shared<const Grid::Impl>(length, count);
  return g;
}

double Grid::length() const { return impl_->length; }
int Grid::size() const { return impl_->n; }
double Grid::dx() const { return impl_->dx; }
const std::vector<double>& Grid::nodes() const { return impl_->nodes; }
const std::vector<double>& Grid::bin_wavenumbers() const { return impl_->xi; }
int Grid::bins() const { return impl_->n / 2 + 1; }

std::vector<double> Grid::wavenumbers() const {
  const int n = impl_->n;
  std::vector<double> out;
  out.reserve(static_cast<size_t>(n));
  for (int k = -n / 2 + 1; k <= n / 2; ++k)
    out.push_back(2.0 * std::numbers::pi * k / impl_->length);
  return out;
}

bool Grid::same_grid(const Grid& other) const {
  if (impl_ == other.impl_) return true;
  return impl_ && other.impl_ && impl_->n == other.impl_->n &&
         impl_->length == other.impl_->length;
}

std::vector<std::complex<double>> Grid::spectrum(const Field& f) const {
  if (!f.grid().same_grid(*this)) throw GridMismatch("spectrum: field on a different grid");
  std::vector<std::complex<double>> out(static_cast<size_t>(bins()));
  impl_->forward(f.values().data(), out.data());
  return out;
}

Field Grid::synthesize(std::span<const std::complex<double>> coeff) const {
  if (static_cast<int>(coeff.size()) != bins())
    throw std::invalid_argument("synthesize: wrong coefficient count");
  std::vector<std::complex<double>> tmp(coeff.begin(), coeff.end());
  Field out(*this);
  impl_->backward(tmp.data(), out.values().data());
  return out;
}

Field Grid::apply_multiplier(const Field& f, std::span<const double> m) const {
  if (!f.grid().same_grid(*this)) throw GridMismatch("apply_multiplier: grid mismatch");
  if (static_cast<int>(m.size()) != bins())
    throw std::invalid_argument("apply_multiplier: wrong multiplier count");
  auto c = spectrum(f);
  for (int k = 0; k < bins(); ++k) c[static_cast<size_t>(k)] *= m[static_cast<size_t>(k)];
  return synthesize(c);
}

Field Grid::apply_odd_multiplier(const Field& f, std::span<const double> m) const {
  if (!f.grid().same_grid(*this)) throw GridMismatch("apply_odd_multiplier: grid mismatch");
  if (static_cast<int>(m.size()) != bins())
    throw std::invalid_argument("apply_odd_multiplier: wrong multiplier count");
  auto c = spectrum(f);
  for (int k = 0; k < bins(); ++k)
    c[static_cast<size_t>(k)] *= std::complex<double>(0.0, m[static_cast<size_t>(k)]);
  c.back() = 0.0;  // Nyquist: keep real fields real
  return synthesize(c);
}

Field::Field(Grid grid)
    : grid_(std::move(grid)), values_(static_cast<size_t>(grid_.size()), 0.0) {}

Field::Field(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_.size())
    throw std::invalid_argument("Field: value count does not match grid");
}

bool Field::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

namespace {
void require_same(const Field& a, const Field& b, const char* what) {
  if (!a.grid().same_grid(b.grid())) throw GridMismatch(what);
}
}  // namespace

Field operator+(const Field& a, const Field& b) {
  require_same(a, b, "field +: grid mismatch");
  Field out = a;
  for (int i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

Field operator-(const Field& a, const Field& b) {
  require_same(a, b, "field -: grid mismatch");
  Field out = a;
  for (int i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

Field operator*(double s, const Field& a) {
  Field out = a;
  for (int i = 0; i < out.size(); ++i) out[i] *= s;
  return out;
}

Field operator*(const Field& a, const Field& b) {
  require_same(a, b, "field *: grid mismatch");
  Field out = a;
  for (int i = 0; i < out.size(); ++i) out[i] *= b[i];
  return out;
}

Field& operator+=(Field& a, const Field& b) {
  require_same(a, b, "field +=: grid mismatch");
  for (int i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

Field& operator-=(Field& a, const Field& b) {
  require_same(a, b, "field -=: grid mismatch");
  for (int i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

Field derivative(const Field& f) {
  return f.grid().apply_odd_multiplier(f, f.grid().bin_wavenumbers());
}

double integrate(const Field& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s * f.grid().dx();
}

double max_abs(const Field& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double min_value(const Field& f) {
  return *std::min_element(f.values().begin(), f.values().end());
}

double max_value(const Field& f) {
  return *std::max_element(f.values().begin(), f.values().end());
}

int argmin_node(const Field& f) {
  return static_cast<int>(std::min_element(f.values().begin(), f.values().end()) -
                          f.values().begin());
}

Field dealias(const Field& f) {
  const Grid& g = f.grid();
  auto c = g.spectrum(f);
  const int cutoff = g.size() / 3;
  for (int k = cutoff + 1; k < g.bins(); ++k) c[static_cast<size_t>(k)] = 0.0;
  return g.synthesize(c);
}

double lp_norm(const Field& f, double p) {
  if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
  if (std::isinf(p)) return max_abs(f);
  double s = 0.0;
  for (double v : f.values()) s += std::pow(std::abs(v), p);
  return std::pow(f.grid().dx() * s, 1.0 / p);
}

double wrap_periodic(double x, double length) {
  double y = x - length * std::floor((x + length / 2) / length);
  if (y >= length / 2) y -= length;  // guard against rounding at the seam
  return y;
}

TrigInterpolant::TrigInterpolant(const Field& f)
    : length_(f.grid().length()), coeff_(f.grid().spectrum(f)) {}

TrigInterpolant::TrigInterpolant(double length, std::vector<std::complex<double>> coeff)
    : length_(length), coeff_(std::move(coeff)) {}

double TrigInterpolant::operator()(double x) const {
  // work relative to the left cell edge so the stored bins apply directly
  const double xp = wrap_periodic(x, length_) + length_ / 2;
  const size_t nb = coeff_.size();
  const double base = 2.0 * std::numbers::pi * xp / length_;
  const std::complex<double> rot(std::cos(base), std::sin(base));
  std::complex<double> e = rot;
  double acc = coeff_[0].real();
  for (size_t k = 1; k + 1 < nb; ++k) {
    acc += 2.0 * (coeff_[k] * e).real();
    e *= rot;
  }
  acc += coeff_[nb - 1].real() * std::cos(base * static_cast<double>(nb - 1));
  return acc;
}

}  // namespace bfam
