#include "bfam/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace bfam {

namespace {

using nlohmann::json;

double num_or_inf(const json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    throw ConfigError("expected a number or \"inf\", got '" + s + "'");
  }
  return v.get<double>();
}

ProfileSpec parse_profile(const json& j) {
  ProfileSpec p;
  p.kind = j.value("kind", p.kind);
  p.amplitude = j.value("amplitude", p.amplitude);
  p.center = j.value("center", p.center);
  p.width = j.value("width", p.width);
  p.slope = j.value("slope", p.slope);
  p.envelope = j.value("envelope", p.envelope);
  p.mode = j.value("mode", p.mode);
  return p;
}

json profile_json(const ProfileSpec& p) {
  return json{{"kind", p.kind},     {"amplitude", p.amplitude}, {"center", p.center},
              {"width", p.width},   {"slope", p.slope},         {"envelope", p.envelope},
              {"mode", p.mode}};
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig cfg;
  try {
    if (j.contains("domain")) {
      cfg.domain.length = j["domain"].value("L", cfg.domain.length);
      cfg.domain.count = j["domain"].value("N", cfg.domain.count);
    }
    if (j.contains("params")) {
      const auto& p = j["params"];
      cfg.params.mode = p.value("mode", cfg.params.mode);
      if (cfg.params.mode == "case_i" || cfg.params.mode == "case_ii") {
        if (!p.contains("b")) throw ConfigError(cfg.params.mode + " requires b");
        cfg.params.b = p["b"].get<double>();
      } else if (cfg.params.mode == "raw") {
        if (!p.contains("k1") || !p.contains("k2") || !p.contains("k3"))
          throw ConfigError("raw params require k1, k2 and k3");
        cfg.params.k1 = p["k1"].get<double>();
        cfg.params.k2 = p["k2"].get<double>();
        cfg.params.k3 = p["k3"].get<double>();
      } else {
        throw ConfigError("params.mode must be case_i, case_ii or raw");
      }
    }
    if (j.contains("init")) {
      if (j["init"].contains("u")) cfg.init.u = parse_profile(j["init"]["u"]);
      if (j["init"].contains("rho")) cfg.init.rho = parse_profile(j["init"]["rho"]);
    }
    if (j.contains("time")) {
      const auto& t = j["time"];
      cfg.time.horizon = t.value("T", cfg.time.horizon);
      cfg.time.cfl_safety = t.value("cfl_safety", cfg.time.cfl_safety);
      cfg.time.sample_every = t.value("sample_every", cfg.time.sample_every);
      cfg.time.fixed_dt = t.value("fixed_dt", cfg.time.fixed_dt);
    }
    if (j.contains("monitors")) {
      cfg.monitors.energy_n = j["monitors"].value("energy_n", cfg.monitors.energy_n);
      cfg.monitors.blowup_threshold =
          j["monitors"].value("blowup_threshold", cfg.monitors.blowup_threshold);
    }
    if (j.contains("besov")) {
      cfg.besov.s = j["besov"].value("s", cfg.besov.s);
      if (j["besov"].contains("p")) cfg.besov.p = num_or_inf(j["besov"]["p"]);
      if (j["besov"].contains("r")) cfg.besov.r = num_or_inf(j["besov"]["r"]);
    }
    if (j.contains("picard")) {
      cfg.picard.n_max = j["picard"].value("n_max", cfg.picard.n_max);
      cfg.picard.mesh_steps = j["picard"].value("mesh_steps", cfg.picard.mesh_steps);
    }
    if (j.contains("blowup")) {
      cfg.blowup.m_bound = j["blowup"].value("M", cfg.blowup.m_bound);
      cfg.blowup.energy_squared = j["blowup"].value("energy_squared", cfg.blowup.energy_squared);
    }
    cfg.input_csv = j.value("input_csv", cfg.input_csv);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }

  if (!(cfg.domain.length > 0)) throw ConfigError("domain.L must be positive");
  if (cfg.domain.count % 2 != 0 || cfg.domain.count < 8)
    throw ConfigError("domain.N must be even and >= 8");
  if (!(cfg.time.horizon > 0)) throw ConfigError("time.T must be positive");
  if (cfg.time.sample_every < 1) throw ConfigError("time.sample_every must be >= 1");
  if (cfg.monitors.energy_n != 1 && cfg.monitors.energy_n != 2)
    throw ConfigError("monitors.energy_n must be 1 or 2");
  if (!(cfg.monitors.blowup_threshold > 0))
    throw ConfigError("monitors.blowup_threshold must be positive");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

Params make_params(const ParamsConfig& pc) {
  if (pc.mode == "case_i") return Params::case_i(pc.b);
  if (pc.mode == "case_ii") return Params::case_ii(pc.b);
  return Params{pc.k1, pc.k2, pc.k3};
}

std::string config_to_json(const RunConfig& cfg) {
  json p;
  p["mode"] = cfg.params.mode;
  if (cfg.params.mode == "raw") {
    p["k1"] = cfg.params.k1;
    p["k2"] = cfg.params.k2;
    p["k3"] = cfg.params.k3;
  } else {
    p["b"] = cfg.params.b;
  }
  json j{
      {"domain", {{"L", cfg.domain.length}, {"N", cfg.domain.count}}},
      {"params", p},
      {"init", {{"u", profile_json(cfg.init.u)}, {"rho", profile_json(cfg.init.rho)}}},
      {"time",
       {{"T", cfg.time.horizon},
        {"cfl_safety", cfg.time.cfl_safety},
        {"sample_every", cfg.time.sample_every},
        {"fixed_dt", cfg.time.fixed_dt}}},
      {"monitors",
       {{"energy_n", cfg.monitors.energy_n},
        {"blowup_threshold", cfg.monitors.blowup_threshold}}},
      {"besov", {{"s", cfg.besov.s}, {"p", cfg.besov.p}, {"r", cfg.besov.r}}},
      {"picard", {{"n_max", cfg.picard.n_max}, {"mesh_steps", cfg.picard.mesh_steps}}},
      {"blowup",
       {{"M", cfg.blowup.m_bound}, {"energy_squared", cfg.blowup.energy_squared}}},
  };
  if (!cfg.input_csv.empty()) j["input_csv"] = cfg.input_csv;
  if (std::isinf(cfg.besov.p)) j["besov"]["p"] = "inf";
  if (std::isinf(cfg.besov.r)) j["besov"]["r"] = "inf";
  return j.dump(2);
}

}  // namespace bfam
