#pragma once

#include <vector>

#include "bfam/grid.hpp"

namespace bfam {

/// Besov space indices B^s_{p,r}; p and r live in [1, inf] (pass
/// std::numeric_limits<double>::infinity() for inf).
struct BesovSpec {
  double s = 0;
  double p = 2;
  double r = 1;
};

/// Discrete dyadic partition of unity on a grid's wavenumbers. chi is the
/// low cutoff (1 on |xi| <= 1, 0 from 4/3 on), phi(xi) = chi(xi/2) - chi(xi)
/// the annulus bump; blocks above j_max vanish identically on the grid.
class DyadicPartition {
 public:
  explicit DyadicPartition(Grid grid);

  const Grid& grid() const { return grid_; }
  int j_max() const { return j_max_; }

  /// chi(|xi_k|) per bin.
  const std::vector<double>& chi() const { return chi_; }
  /// phi(2^{-j} |xi_k|) per bin, 0 <= j <= j_max.
  const std::vector<double>& phi(int j) const;
  /// chi(2^{-j} |xi_k|) per bin (the S_j multiplier), j >= 0.
  std::vector<double> lowpass_multiplier(int j) const;

  /// The scalar cutoff: 1 for t <= 1, 0 for t >= 4/3, smooth in between.
  static double chi_function(double t);
  static double phi_function(double t);

 private:
  Grid grid_;
  int j_max_ = -1;
  std::vector<double> chi_;
  std::vector<std::vector<double>> phi_;
};

DyadicPartition build_partition(const Grid& grid);

/// Dyadic block Delta_j f. Zero for j <= -2 and for j > j_max; j = -1 is the
/// chi block. Sum over j = -1..j_max reconstructs f.
Field lp_block(const Field& f, int j, const DyadicPartition& part);

/// Low-pass S_j f = sum_{j' < j} Delta_{j'} f; zero for j <= -1.
Field lowpass_sj(const Field& f, int j, const DyadicPartition& part);

/// Besov norm: l^r over j of 2^{js} ||Delta_j f||_{L^p}.
double besov_norm(const Field& f, const BesovSpec& spec, const DyadicPartition& part);

/// Sobolev norm via the discrete Plancherel sum with weight (1+xi^2)^s.
double sobolev_norm(const Field& f, double s);

struct InterpolationReport {
  double lhs = 0;
  double rhs = 0;
  bool violated = false;
};

/// Checks ||u||_{B^{theta s1+(1-theta)s2}} <= ||u||^theta_{B^{s1}} ||u||^{1-theta}_{B^{s2}}.
InterpolationReport check_interpolation(const Field& f, double s1, double s2,
                                        double theta, double p, double r,
                                        const DyadicPartition& part);

}  // namespace bfam
