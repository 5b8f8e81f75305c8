#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bulkedge/potential.hpp"
#include "bulkedge/propagator.hpp"

namespace bulkedge {

enum class Model { schrodinger, dirac };

struct RunConfig {
  Model model = Model::schrodinger;
  TrigPotential potential;
  std::vector<std::pair<double, double>> chi_breakpoints{{-0.5, 1.0}, {0.5, 0.0}};
  std::vector<int> gaps;  // empty: every gap found in the window (Dirac) or 1..3 (Schrodinger)
  std::optional<double> window_lo;
  std::optional<double> window_hi;
  int grid_t = 400;
  int grid_e = 48;
  int grid_k = 40;
  int chern_cutoff = 32;
  PropagationSettings prop;
  std::string output_dir = "out";

  SwitchFunction chi() const { return SwitchFunction(chi_breakpoints); }
  double lo() const;
  double hi() const;
};

// Keys accepted in configuration files, in documentation order.
const std::vector<std::string>& config_keys();

// "potential.cos" -> "BULKEDGE_POTENTIAL_COS"
std::string env_name(std::string_view key);

// Parses `key = value` lines; '#' starts a comment. With use_env set,
// BULKEDGE_* variables override file values. Throws ConfigError carrying
// the offending line number.
RunConfig parse_config(std::string_view text, bool use_env = true);

// A bundled config name (paper_schrodinger, paper_dirac) or a file path.
RunConfig load_config(const std::string& name_or_path, bool use_env = true);

std::optional<std::string_view> bundled_config(std::string_view name);

}  // namespace bulkedge
