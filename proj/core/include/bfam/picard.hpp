#pragma once

#include <vector>

#include "bfam/dynamics.hpp"
#include "bfam/grid.hpp"
#include "bfam/littlewood_paley.hpp"

namespace bfam {

/// Solve the linear transport problem f_t - a f_x = g with frozen advecting
/// field. a and g are sampled on the uniform mesh t_j = j T/K (K = a.size()-1
/// steps); RK4 advances one mesh interval per step, with the half-step
/// coefficient values from 4-point temporal interpolation. Returns f on the
/// same mesh. Throws CflViolation if the mesh spacing exceeds
/// cfl_safety * dx / max(1, sup_t ||a||_inf).
std::vector<Field> solve_linear_transport(const std::vector<Field>& a,
                                          const std::vector<Field>& g,
                                          const Field& f0, double T,
                                          double cfl_safety = 0.3);

/// One entry of the constructive iteration: the (n+1)-th iterate with its
/// Cauchy gap against the n-th, measured in the discrete
/// B^{1+1/p}_{p,1} x B^{1/p}_{p,1} norms (sup over mesh times).
struct IterationRecord {
  int n = 0;                   // this is iterate number n (>= 1)
  std::vector<Field> u, rho;   // trajectory on the shared mesh
  double gap_u = 0, gap_rho = 0;
  double sup_norm = 0;              // sup_t (||u^n||_{B^{1+1/p}} + ||rho^n||_{B^{1/p}})
  std::vector<double> norm_t;       // the combined norm at each mesh time
};

struct PicardOptions {
  int mesh_steps = 0;     // 0 = derive from the CFL bound
  double p = 2;           // Besov integrability index
  double cfl_safety = 0.3;
};

struct PicardResult {
  std::vector<IterationRecord> records;
  std::vector<double> mesh_times;
  bool non_convergence = false;  // gaps grew over 3 consecutive iterates
  std::string message;
};

/// The existence-proof iteration: u^0 = rho^0 = 0; each step solves the two
/// linear transport problems with sources F^n, G^n and low-pass initial data
/// S_{n+1} u_0, S_{n+1} rho_0. Divergence is reported, never thrown.
PicardResult picard_iterate(const Field& u0, const Field& rho0, const Params& params,
                            int n_max, double T, const PicardOptions& opts = {});

struct BoundCheckReport {
  double initial_norm = 0;        // ||u0||_{B^{1+1/p}} + ||rho0||_{B^{1/p}}
  double fitted_c = 0;            // smallest C making the envelope hold
  bool envelope_valid = false;    // 1 - 8 C D^2 t stays positive on [0,T]
  std::vector<double> sup_over_n;      // per mesh time
  std::vector<double> envelope;        // fitted envelope per mesh time
};

/// Fits the smallest C in the envelope 2 D / sqrt(1 - 8 C D^2 t) over the
/// recorded iterates (D the initial combined norm).
BoundCheckReport uniform_bound_check(const PicardResult& result, const Field& u0,
                                     const Field& rho0, double T, double p = 2);

}  // namespace bfam
