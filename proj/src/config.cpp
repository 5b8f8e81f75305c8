#include "bulkedge/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

#include "bulkedge/bundled_configs.hpp"
#include "bulkedge/error.hpp"

namespace bulkedge {

namespace {

struct Entry {
  std::string value;
  int line = 0;
  std::string origin;  // empty for file entries
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail(const Entry& e, const std::string& key, const std::string& what) {
  if (!e.origin.empty()) throw Error(ErrorCode::config, e.origin + ": " + what);
  throw ConfigError(e.line, key + ": " + what);
}

double to_double(const Entry& e, const std::string& key, std::string_view text) {
  const std::string s = trim(text);
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(v))
    fail(e, key, "'" + s + "' is not a finite number");
  return v;
}

int to_int(const Entry& e, const std::string& key, std::string_view text) {
  const std::string s = trim(text);
  int v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size()) fail(e, key, "'" + s + "' is not an integer");
  return v;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

std::vector<double> doubles(const Entry& e, const std::string& key) {
  std::vector<double> out;
  for (const auto& item : split_list(e.value)) out.push_back(to_double(e, key, item));
  return out;
}

int positive(const Entry& e, const std::string& key, int minimum) {
  const int v = to_int(e, key, e.value);
  if (v < minimum) fail(e, key, "must be at least " + std::to_string(minimum));
  return v;
}

}  // namespace

double RunConfig::lo() const { return window_lo.value_or(model == Model::dirac ? -4.0 : -60.0); }
double RunConfig::hi() const { return window_hi.value_or(model == Model::dirac ? 4.0 : 240.0); }

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "model",        "potential.constant",    "potential.cos",         "potential.sin",
      "chi.breakpoints", "gaps",               "window.lo",             "window.hi",
      "grid.t",       "grid.e",                "grid.k",                "chern.cutoff",
      "propagation.rel_tol", "propagation.abs_tol", "propagation.max_step", "propagation.rescale_threshold",
      "output.dir"};
  return keys;
}

std::string env_name(std::string_view key) {
  std::string out = "BULKEDGE_";
  for (char c : key) out += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

RunConfig parse_config(std::string_view text, bool use_env) {
  const auto& keys = config_keys();
  std::map<std::string, Entry> entries;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw.substr(0, raw.find('#'));
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError(line_no, "unknown key '" + key + "'");
    if (entries.count(key)) throw ConfigError(line_no, "duplicate key '" + key + "'");
    entries[key] = {trim(line.substr(eq + 1)), line_no, {}};
  }
  if (use_env)
    for (const auto& key : keys)
      if (const char* v = std::getenv(env_name(key).c_str())) entries[key] = {v, 0, "environment " + env_name(key)};

  RunConfig cfg;
  for (const auto& [key, e] : entries) {
    if (key == "model") {
      if (e.value == "schrodinger") cfg.model = Model::schrodinger;
      else if (e.value == "dirac") cfg.model = Model::dirac;
      else fail(e, key, "expected 'schrodinger' or 'dirac', got '" + e.value + "'");
    } else if (key == "potential.constant") {
      cfg.potential.constant = to_double(e, key, e.value);
    } else if (key == "potential.cos") {
      cfg.potential.cos_coeffs = doubles(e, key);
    } else if (key == "potential.sin") {
      cfg.potential.sin_coeffs = doubles(e, key);
    } else if (key == "chi.breakpoints") {
      static const std::regex pair_re(R"(\s*\(([^,()]*),([^,()]*)\)\s*(,|$))");
      std::vector<std::pair<double, double>> pts;
      auto it = e.value.cbegin();
      std::smatch m;
      while (it != e.value.cend()) {
        if (!std::regex_search(it, e.value.cend(), m, pair_re, std::regex_constants::match_continuous))
          fail(e, key, "expected a list of (x, value) pairs");
        pts.emplace_back(to_double(e, key, m[1].str()), to_double(e, key, m[2].str()));
        it = m[0].second;
      }
      try {
        SwitchFunction check(pts);
      } catch (const Error& err) {
        fail(e, key, err.what());
      }
      cfg.chi_breakpoints = std::move(pts);
    } else if (key == "gaps") {
      cfg.gaps.clear();
      for (const auto& item : split_list(e.value)) {
        const int n = to_int(e, key, item);
        if (n < 1) fail(e, key, "gap numbers start at 1");
        cfg.gaps.push_back(n);
      }
    } else if (key == "window.lo") {
      cfg.window_lo = to_double(e, key, e.value);
    } else if (key == "window.hi") {
      cfg.window_hi = to_double(e, key, e.value);
    } else if (key == "grid.t") {
      cfg.grid_t = positive(e, key, 2);
    } else if (key == "grid.e") {
      cfg.grid_e = positive(e, key, 2);
    } else if (key == "grid.k") {
      cfg.grid_k = positive(e, key, 2);
    } else if (key == "chern.cutoff") {
      cfg.chern_cutoff = positive(e, key, 1);
    } else if (key == "propagation.rel_tol") {
      cfg.prop.rel_tol = to_double(e, key, e.value);
    } else if (key == "propagation.abs_tol") {
      cfg.prop.abs_tol = to_double(e, key, e.value);
    } else if (key == "propagation.max_step") {
      cfg.prop.max_step = to_double(e, key, e.value);
    } else if (key == "propagation.rescale_threshold") {
      cfg.prop.rescale_threshold = to_double(e, key, e.value);
    } else if (key == "output.dir") {
      if (e.value.empty()) fail(e, key, "output directory must not be empty");
      cfg.output_dir = e.value;
    }
  }
  try {
    cfg.prop.validate();
  } catch (const Error& err) {
    throw Error(ErrorCode::config, std::string("propagation settings: ") + err.what());
  }
  if (!(cfg.lo() < cfg.hi())) throw Error(ErrorCode::config, "window.lo must be below window.hi");
  std::sort(cfg.gaps.begin(), cfg.gaps.end());
  cfg.gaps.erase(std::unique(cfg.gaps.begin(), cfg.gaps.end()), cfg.gaps.end());
  if (cfg.model == Model::schrodinger && cfg.gaps.empty()) cfg.gaps = {1, 2, 3};
  return cfg;
}

std::optional<std::string_view> bundled_config(std::string_view name) {
  if (name == "paper_schrodinger") return bundled::paper_schrodinger;
  if (name == "paper_dirac") return bundled::paper_dirac;
  return std::nullopt;
}

RunConfig load_config(const std::string& name_or_path, bool use_env) {
  if (const auto text = bundled_config(name_or_path)) return parse_config(*text, use_env);
  std::ifstream in(name_or_path, std::ios::binary);
  if (!in) throw Error(ErrorCode::config, "cannot read config '" + name_or_path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), use_env);
}

}  // namespace bulkedge
