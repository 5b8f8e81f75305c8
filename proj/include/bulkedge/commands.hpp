#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bulkedge/config.hpp"

namespace bulkedge {

enum ExitCode : int { exit_ok = 0, exit_assertion = 1, exit_config = 2, exit_numerical = 3 };

struct CommandOptions {
  RunConfig config;
  std::filesystem::path out_dir;  // empty: config.output_dir
  std::optional<int> gap;
  bool verify = false;
};

struct IndexRow {
  int n = 0;
  int B = 0, Ch_plaquette = 0, Ch_frame = 0, I = 0, S_dw = 0, S_dirichlet = 0, S_resonant = 0, zeros = 0;
  bool dirichlet_monotone = false;
  double join_error = 0.0;
  bool pass = false;
};

struct DiracIndexRow {
  int n = 0;
  double lo = 0.0, hi = 0.0;
  int B = 0, I = 0, S = 0;
  double symmetry = 0.0;
  bool pass = false;
};

// The cmd_* functions write their CSVs into the output directory and throw
// bulkedge::Error on failure. Row checks that fail are collected and
// reported through a single AssertionFailure after all files are written.
void cmd_bands(const CommandOptions& options, std::ostream& log);
std::vector<IndexRow> cmd_indices(const CommandOptions& options, std::ostream& log);
void cmd_sweep(const CommandOptions& options, std::ostream& log);
std::vector<DiracIndexRow> cmd_dirac(const CommandOptions& options, std::ostream& log);

// Runs a command by name, mapping exceptions to exit codes and writing
// failure_report.json into the output directory on failure.
int run_command(const std::string& name, const CommandOptions& options, std::ostream& log, std::ostream& err);

int exit_code_for(const std::exception& e);

// Prints the error and writes failure_report.json into dir (skipped when
// dir is empty). Returns the exit code.
int report_failure(const std::string& command, const std::exception& e, const std::filesystem::path& dir,
                   std::ostream& err);

}  // namespace bulkedge
