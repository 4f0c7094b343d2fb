#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"

namespace mkg::cli {

enum ExitCode : int { kOk = 0, kValidation = 2, kNumerical = 3 };

const std::vector<std::string>& subcommands();

// Output of one subcommand. Files go to out_dir; the summary ends up in the
// manifest and on stdout.
struct CommandResult {
  int exit_code = kOk;
  nlohmann::json summary = nlohmann::json::object();
  nlohmann::json timings = nlohmann::json::object();
};

// Runs one subcommand for one seed and writes out_dir/manifest.json.
// Never throws for configuration or numerical failures; those map to the
// exit codes above.
int run_command(const std::string& name, const RunConfig& cfg, const std::string& out_dir, bool quiet);

// Parses "a..b" or a single seed.
std::vector<long> parse_seed_range(const std::string& text);

// Entry point shared by main() and the tests.
int run_cli(int argc, char** argv);

}  // namespace mkg::cli
