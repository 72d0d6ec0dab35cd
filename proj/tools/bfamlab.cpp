// Command-line driver for the two-component b-family laboratory.
//
//   bfamlab <simulate|picard|characteristics|besov|blowup> --config c.json --out dir
//
// Exit codes: 0 normal completion, 2 run stopped at the slope threshold
// (a documented outcome for breaking runs), 1 config or numerical error.

#include <exception>
#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bfam/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for the two-component b-family system"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  bool quiet = false;

  using Runner = std::function<int(const bfam::RunConfig&, const std::string&, bool)>;
  struct Entry {
    const char* name;
    const char* help;
    Runner run;
  };
  const Entry entries[] = {
      {"simulate", "evolve (u, rho) and write fields, diagnostics and a report",
       bfam::run_simulate},
      {"picard", "run the constructive iteration and write the Cauchy-gap table",
       bfam::run_picard},
      {"characteristics", "integrate the flow map and write (t, xi, y, y_xi, U, V)",
       bfam::run_characteristics},
      {"besov", "compute Littlewood-Paley/Besov norms of a field",
       bfam::run_besov},
      {"blowup", "evaluate the breaking criterion and write the m(t) trace",
       bfam::run_blowup},
  };

  Runner selected;
  for (const auto& e : entries) {
    auto* sub = app.add_subcommand(e.name, e.help);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory")->required();
    sub->add_flag("--quiet", quiet, "suppress stdout summaries");
    sub->callback([&selected, &e] { selected = e.run; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const bfam::RunConfig cfg = bfam::load_config(config_path);
    return selected(cfg, out_dir, quiet);
  } catch (const std::exception& e) {
    std::cerr << "bfamlab: " << e.what() << "\n";
    return 1;
  }
}
