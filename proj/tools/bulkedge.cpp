#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "bulkedge/commands.hpp"
#include "bulkedge/config.hpp"
#include "bulkedge/error.hpp"
#include "bulkedge/parallel.hpp"

int main(int argc, char** argv) {
  using namespace bulkedge;

  CLI::App app{"Topological indices of 1D periodic Schrodinger and Dirac operators with dislocations"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config = "paper_schrodinger";
  std::string out;
  int jobs = 0;
  std::optional<int> gap, grid_t, grid_e;
  bool verify = false;

  app.add_option("--config", config, "bundled config name (paper_schrodinger, paper_dirac) or file path");
  app.add_option("--out", out, "output directory (default: output.dir of the config)");
  app.add_option("--jobs", jobs, "worker threads, 0 = hardware concurrency")->check(CLI::NonNegativeNumber);
  app.add_option("--gap", gap, "restrict to a single gap")->check(CLI::PositiveNumber);
  app.add_option("--grid-t", grid_t, "number of t intervals")->check(CLI::Range(2, 1 << 20));
  app.add_option("--grid-e", grid_e, "initial energy samples per gap")->check(CLI::Range(2, 1 << 20));
  app.add_flag("--verify", verify, "check the index identities and fail with exit code 1 if they do not hold");

  app.add_subcommand("bands", "band edges and gap table (gaps.csv)");
  app.add_subcommand("indices", "bulk, Chern, edge and spectral-flow indices per gap (indices.csv)");
  app.add_subcommand("sweep", "spectra against t for the domain wall and Dirichlet problems");
  app.add_subcommand("dirac", "Dirac gaps, indices, spectral flow and zero mode");
  app.footer("Config keys may be overridden by environment variables: key 'grid.t' -> BULKEDGE_GRID_T.");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_config;
  }

  CommandOptions options;
  options.out_dir = out;
  options.gap = gap;
  options.verify = verify;
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    options.config = load_config(config);
  } catch (const Error& e) {
    return report_failure(command, e, out, std::cerr);
  }
  if (grid_t) options.config.grid_t = *grid_t;
  if (grid_e) options.config.grid_e = *grid_e;
  set_jobs(jobs);

  return run_command(command, options, std::cout, std::cerr);
}
