#pragma once

#include <string>

#include "bfam/config.hpp"

namespace bfam {

/// Subcommand drivers behind the CLI. Each writes its files under out_dir
/// and returns the process exit code: 0 on normal completion, 2 when a run
/// stopped at the slope threshold (a documented outcome, not a failure).
/// Config and numerical errors are thrown; the CLI maps them to exit 1.
int run_simulate(const RunConfig& cfg, const std::string& out_dir, bool quiet = false);
int run_picard(const RunConfig& cfg, const std::string& out_dir, bool quiet = false);
int run_characteristics(const RunConfig& cfg, const std::string& out_dir, bool quiet = false);
int run_besov(const RunConfig& cfg, const std::string& out_dir, bool quiet = false);
int run_blowup(const RunConfig& cfg, const std::string& out_dir, bool quiet = false);

/// Fixed 17-significant-digit float formatting used by every CSV body, so
/// identical configs give byte-identical files.
std::string format_g17(double v);

}  // namespace bfam
