#pragma once

#include <stdexcept>
#include <string>

#include "bfam/dynamics.hpp"

namespace bfam {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainConfig {
  double length = 40.0;
  int count = 512;
};

struct ParamsConfig {
  std::string mode = "case_i";  // case_i | case_ii | raw
  double b = 2.0;
  double k1 = 0, k2 = 0, k3 = 0;  // raw mode
};

struct InitConfig {
  ProfileSpec u;
  ProfileSpec rho;
};

struct TimeConfig {
  double horizon = 1.0;
  double cfl_safety = 0.3;
  int sample_every = 1;
  double fixed_dt = 0;
};

struct MonitorConfig {
  int energy_n = 1;
  double blowup_threshold = 1e3;
};

struct BesovSpecConfig {
  double s = 1.5;
  double p = 2;
  double r = 1;
};

struct PicardRunConfig {
  int n_max = 8;
  int mesh_steps = 0;
};

struct BlowupRunConfig {
  double m_bound = -1;  // < 0: measure from the run
  bool energy_squared = true;
};

struct RunConfig {
  DomainConfig domain;
  ParamsConfig params;
  InitConfig init;
  TimeConfig time;
  MonitorConfig monitors;
  BesovSpecConfig besov;
  PicardRunConfig picard;
  BlowupRunConfig blowup;
  std::string input_csv;  // besov subcommand: read the field from CSV
};

/// Parse a JSON config file; cross-field consistency is validated here
/// (case_i/case_ii need b, raw needs all three k's).
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text);

Params make_params(const ParamsConfig& pc);

/// JSON echo of a config, suitable for report.json round-trips.
std::string config_to_json(const RunConfig& cfg);

}  // namespace bfam
