#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dtnsim/config.hpp"
#include "dtnsim/engine.hpp"

namespace dtnsim {

/// Process exit codes shared by the sweep commands.
enum ExitStatus : int { exit_ok = 0, exit_run_failed = 1, exit_config_error = 2 };

std::string run_id_for(std::size_t n_categories, std::uint64_t seed);

/// Builds the scenario of one sweep point, appending any profile or
/// category-name adaptation to `log`.
Scenario build_scenario(const RunConfig& config, std::size_t n_categories, std::uint64_t seed,
                        std::vector<std::string>& log);

/// Runs every (n_categories, seed) pair and writes the output tree:
///
///   <out>/effective_config.txt
///   <out>/summary.csv
///   <out>/sweep.log
///   <out>/runs/<run_id>/{summary.csv,messages.csv,groups.txt[,clustering.txt]}
///
/// Returns exit_ok, or exit_run_failed if any run failed.
int run_sweep(const RunConfig& config, std::ostream& err);

/// Checks trace/profile consistency and prints the report to `out`.
int validate_command(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Writes trace_s<seed>.txt and profiles_s<seed>.txt per seed.
int gen_trace_command(const RunConfig& config, std::ostream& err);

} // namespace dtnsim
