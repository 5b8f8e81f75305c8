#include "bulkedge/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "bulkedge/chern.hpp"
#include "bulkedge/csv.hpp"
#include "bulkedge/dirac.hpp"
#include "bulkedge/error.hpp"
#include "bulkedge/schrodinger_indices.hpp"

namespace bulkedge {

namespace fs = std::filesystem;

namespace {

fs::path output_dir(const CommandOptions& o) {
  fs::path dir = o.out_dir.empty() ? fs::path(o.config.output_dir) : o.out_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::config, "cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

std::vector<int> schrodinger_gaps(const CommandOptions& o) {
  if (o.gap) return {*o.gap};
  return o.config.gaps;
}

SchrodingerSystem make_schrodinger(const CommandOptions& o) {
  const RunConfig& c = o.config;
  SchrodingerModel m;
  m.V = c.potential;
  m.chi = c.chi();
  m.prop = c.prop;
  m.grid_t = c.grid_t;
  m.grid_e = c.grid_e;
  const auto gaps = schrodinger_gaps(o);
  return SchrodingerSystem(std::move(m), *std::max_element(gaps.begin(), gaps.end()), c.lo(), c.hi());
}

void write_gap_table(const GapTable& table, const fs::path& path) {
  CsvWriter w(path, {"n", "E_minus", "E_plus", "gap_lo", "gap_hi", "open"});
  for (int n = 1; n <= table.n_max(); ++n) {
    const auto& b = table.bands[n - 1];
    const Gap& g = table.gaps[n];
    w.row({n, b.first, b.second, g.lo, g.hi, g.open ? 1 : 0});
  }
}

void write_phase_path(CsvWriter& w, const PhasePath& p, int n) {
  for (const auto& s : p.samples) w.row({s.t, s.z.real(), s.z.imag(), s.alpha, n});
}

void throw_failures(const std::vector<std::string>& failures) {
  if (failures.empty()) return;
  std::string msg;
  for (const auto& f : failures) msg += (msg.empty() ? "" : "; ") + f;
  throw AssertionFailure(msg);
}

std::string describe(const IndexRow& r) {
  std::ostringstream os;
  os << "gap " << r.n << ": B=" << r.B << " Ch=" << r.Ch_plaquette << "/" << r.Ch_frame << " I=" << r.I
     << " S_dw=" << r.S_dw << " S_dir=" << r.S_dirichlet << " S_res=" << r.S_resonant << " zeros=" << r.zeros;
  if (!r.dirichlet_monotone) os << " (Dirichlet branches not monotone)";
  if (!(r.join_error < 1e-4)) os << " (join error " << r.join_error << ")";
  return os.str();
}

std::vector<IndexRow> run_schrodinger(const CommandOptions& o, std::ostream& log, bool sweep_outputs, bool check) {
  const RunConfig& c = o.config;
  const fs::path dir = output_dir(o);
  const SchrodingerSystem sys = make_schrodinger(o);
  write_gap_table(sys.gaps(), dir / "gaps.csv");
  log << "gap table written (" << sys.gaps().n_max() << " gaps)\n";

  std::optional<CsvWriter> dw, dir_flow, phase, curvature;
  if (sweep_outputs) {
    dw.emplace(dir / "flow_dw.csv", std::vector<std::string>{"t", "E", "branch_id", "gap"});
    dir_flow.emplace(dir / "flow_dirichlet.csv", std::vector<std::string>{"t", "E", "kind", "branch_id", "gap"});
    phase.emplace(dir / "phase_path.csv", std::vector<std::string>{"t", "re_z", "im_z", "alpha", "gap"});
    curvature.emplace(dir / "berry_curvature.csv", std::vector<std::string>{"t", "k", "plaquette_phase", "bands"});
  }

  std::vector<IndexRow> rows;
  int dw_offset = 0, dir_offset = 0;
  for (int n : schrodinger_gaps(o)) {
    sys.gaps().open_gap(n);
    IndexRow r;
    r.n = n;
    const FlowResult f = sys.domain_wall_flow(n);
    const DirichletFlowResult d = sys.dirichlet_flow(n);
    r.S_dw = f.flow;
    r.S_dirichlet = d.eigen.flow;
    r.S_resonant = d.resonant.flow;
    r.dirichlet_monotone = d.max_eigen_slope < 0.0 && d.min_resonant_slope > 0.0;
    r.join_error = d.join_error;
    log << "gap " << n << ": domain-wall flow " << f.flow << ", Dirichlet flow " << d.eigen.flow << ", resonant flow "
        << d.resonant.flow << "\n";

    const PlaquetteResult pq = chern_plaquette(c.potential, n, c.grid_k, c.grid_k, c.chern_cutoff);
    r.Ch_plaquette = pq.chern;
    if (sweep_outputs) {
      for (const auto& s : f.samples) dw->row({s.t, s.E, s.branch + dw_offset, n});
      dw_offset += f.branch_count;
      for (const auto* fr : {&d.eigen, &d.resonant}) {
        const std::string kind = fr == &d.eigen ? "eigen" : "resonant";
        for (const auto& s : fr->samples) dir_flow->row({s.t, s.E, kind, s.branch + dir_offset, n});
        dir_offset += fr->branch_count;
      }
      for (const auto& s : pq.curvature) curvature->row({s.t, s.k, s.phase, n});
      write_phase_path(*phase, sys.omega_path(n), n);
    }
    if (check) {
      r.B = sys.bulk_index(n);
      r.zeros = zeros_in_cell(c.potential, 0.0, sys.gaps().gaps[n].mid(), Side::plus, c.prop);
      r.Ch_frame = chern_frame(c.potential, n, c.grid_k, c.chern_cutoff).chern;
      r.I = sys.edge_index(n);
      r.pass = r.B == n && r.Ch_plaquette == n && r.Ch_frame == n && r.I == n && r.S_dw == n && r.S_dirichlet == n &&
               r.S_resonant == -n && r.zeros == n && r.dirichlet_monotone && r.join_error < 1e-4;
      log << describe(r) << (r.pass ? "  pass" : "  FAIL") << "\n";
    }
    rows.push_back(r);
  }

  if (sweep_outputs && !schrodinger_gaps(o).empty()) {
    CsvWriter es(dir / "edge_state.csv", {"x", "u", "du"});
    const auto evs = sys.edge_eigenvalues_at(0.5, schrodinger_gaps(o).front(), true);
    if (!evs.empty())
      for (const auto& s : evs.front().state->samples) es.row({s[0], s[1], s[2]});
  }

  if (check) {
    CsvWriter w(dir / "indices.csv", {"n", "B", "Ch_plaquette", "Ch_frame", "I", "S_dw", "S_dirichlet", "S_resonant",
                                      "zeros", "join_error", "pass"});
    std::vector<std::string> failures;
    for (const auto& r : rows) {
      w.row({r.n, r.B, r.Ch_plaquette, r.Ch_frame, r.I, r.S_dw, r.S_dirichlet, r.S_resonant, r.zeros, r.join_error,
             r.pass ? 1 : 0});
      if (!r.pass) failures.push_back(describe(r));
    }
    throw_failures(failures);
  }
  return rows;
}

}  // namespace

void cmd_bands(const CommandOptions& o, std::ostream& log) {
  const RunConfig& c = o.config;
  const fs::path dir = output_dir(o);
  SpectrumOptions so;
  so.prop = c.prop;
  so.cutoff = c.chern_cutoff;
  GapTable table;
  if (c.model == Model::dirac) {
    table = dirac_gap_table(c.potential, c.lo(), c.hi(), so);
  } else {
    const auto gaps = schrodinger_gaps(o);
    table = band_edges(c.potential, *std::max_element(gaps.begin(), gaps.end()), c.lo(), c.hi(), so);
    if (o.verify)
      for (int n : gaps) table.open_gap(n);
  }
  write_gap_table(table, dir / "gaps.csv");
  for (int n = 1; n <= table.n_max(); ++n) {
    const Gap& g = table.gaps[n];
    log << "gap " << n << ": (" << format_double(g.lo) << ", " << format_double(g.hi) << ")"
        << (g.open ? "" : " closed") << "\n";
  }
}

std::vector<IndexRow> cmd_indices(const CommandOptions& o, std::ostream& log) {
  if (o.config.model == Model::dirac) {
    cmd_dirac(o, log);
    return {};
  }
  return run_schrodinger(o, log, false, true);
}

void cmd_sweep(const CommandOptions& o, std::ostream& log) {
  if (o.config.model == Model::dirac) {
    cmd_dirac(o, log);
    return;
  }
  run_schrodinger(o, log, true, o.verify);
}

std::vector<DiracIndexRow> cmd_dirac(const CommandOptions& o, std::ostream& log) {
  const RunConfig& c = o.config;
  if (c.model != Model::dirac) throw Error(ErrorCode::config, "the dirac command needs model = dirac");
  const fs::path dir = output_dir(o);
  DiracModel m;
  m.V = c.potential;
  m.chi = c.chi();
  m.prop = c.prop;
  m.grid_t = c.grid_t;
  m.grid_e = c.grid_e;
  const DiracSystem sys(std::move(m), c.lo(), c.hi());
  write_gap_table(sys.gaps(), dir / "gaps.csv");
  log << "Dirac gaps in window: " << sys.gap_count() << "\n";

  std::vector<int> selected;
  if (o.gap) selected = {*o.gap};
  else if (!c.gaps.empty()) selected = c.gaps;
  else
    for (int n = 1; n <= sys.gap_count(); ++n) selected.push_back(n);
  if (selected.empty()) throw AssertionFailure("no open Dirac gap in the window");

  CsvWriter flow_csv(dir / "dirac_flow.csv", {"t", "E", "branch_id", "gap"});
  CsvWriter phase(dir / "phase_path.csv", {"t", "re_z", "im_z", "alpha", "gap"});
  std::vector<DiracIndexRow> rows;
  std::vector<std::string> failures;
  int offset = 0;
  for (int n : selected) {
    const Gap& g = sys.gaps().open_gap(n);
    DiracIndexRow r;
    r.n = n;
    r.lo = g.lo;
    r.hi = g.hi;
    r.B = sys.bulk_index(n);
    const PhasePath path = sys.omega_path(n);
    r.I = winding_number(path);
    const FlowResult f = sys.flow(n);
    r.S = f.flow;
    r.symmetry = sys.symmetry_check(n, c.grid_t);
    r.pass = r.B == 1 && r.I == 1 && r.S == 1 && r.symmetry < 1e-6;
    for (const auto& s : f.samples) flow_csv.row({s.t, s.E, s.branch + offset, n});
    offset += f.branch_count;
    write_phase_path(phase, path, n);
    log << "gap " << n << ": B=" << r.B << " I=" << r.I << " S=" << r.S << " symmetry=" << format_double(r.symmetry)
        << (r.pass ? "  pass" : "  FAIL") << "\n";
    if (!r.pass)
      failures.push_back("Dirac gap " + std::to_string(n) + ": B=" + std::to_string(r.B) + " I=" +
                         std::to_string(r.I) + " S=" + std::to_string(r.S) + " symmetry " + format_double(r.symmetry));
    rows.push_back(r);
  }

  CsvWriter w(dir / "dirac_indices.csv", {"n", "gap_lo", "gap_hi", "B", "I", "S", "symmetry", "pass"});
  for (const auto& r : rows) w.row({r.n, r.lo, r.hi, r.B, r.I, r.S, r.symmetry, r.pass ? 1 : 0});

  CsvWriter zm_csv(dir / "zero_mode.csv", {"x", "re_up", "im_up", "re_down", "im_down"});
  const ZeroMode zm = sys.zero_mode();
  for (const auto& s : zm.samples) zm_csv.row({s.x, s.up.real(), s.up.imag(), s.down.real(), s.down.imag()});
  log << "zero mode at E = " << format_double(zm.E) << ", decay rates " << format_double(zm.decay_rate_left) << " / "
      << format_double(zm.decay_rate_right) << "\n";
  auto rate_ok = [](double measured, double expected) {
    return expected > 0.0 && std::abs(measured - expected) < 0.05 * expected;
  };
  if (!rate_ok(zm.decay_rate_left, zm.expected_left) || !rate_ok(zm.decay_rate_right, zm.expected_right))
    failures.push_back("zero mode decay rates " + format_double(zm.decay_rate_left) + ", " +
                       format_double(zm.decay_rate_right) + " do not match Floquet rates " +
                       format_double(zm.expected_left) + ", " + format_double(zm.expected_right));
  throw_failures(failures);
  return rows;
}

int exit_code_for(const std::exception& e) {
  if (const auto* be = dynamic_cast<const Error*>(&e)) {
    switch (be->code()) {
      case ErrorCode::assertion: return exit_assertion;
      case ErrorCode::config: return exit_config;
      default: return exit_numerical;
    }
  }
  return exit_numerical;
}

int report_failure(const std::string& command, const std::exception& e, const fs::path& dir, std::ostream& err) {
  const int code = exit_code_for(e);
  const auto* be = dynamic_cast<const Error*>(&e);
  err << "error: " << e.what() << "\n";
  if (dir.empty()) return code;
  nlohmann::json report = {{"command", command},
                           {"exit_code", code},
                           {"error", be ? to_string(be->code()) : "internal"},
                           {"message", e.what()}};
  if (const auto* ie = dynamic_cast<const IntegrationError*>(&e)) report["last_x"] = ie->last_x();
  if (const auto* ce = dynamic_cast<const ConfigError*>(&e)) report["line"] = ce->line();
  try {
    fs::create_directories(dir);
    std::ofstream(dir / "failure_report.json", std::ios::binary) << report.dump(2) << "\n";
  } catch (const std::exception&) {
    err << "could not write failure_report.json\n";
  }
  return code;
}

int run_command(const std::string& name, const CommandOptions& o, std::ostream& log, std::ostream& err) {
  try {
    if (name == "bands") cmd_bands(o, log);
    else if (name == "indices") cmd_indices(o, log);
    else if (name == "sweep") cmd_sweep(o, log);
    else if (name == "dirac") cmd_dirac(o, log);
    else throw Error(ErrorCode::config, "unknown command '" + name + "'");
    return exit_ok;
  } catch (const std::exception& e) {
    return report_failure(name, e, o.out_dir.empty() ? fs::path(o.config.output_dir) : o.out_dir, err);
  }
}

}  // namespace bulkedge
