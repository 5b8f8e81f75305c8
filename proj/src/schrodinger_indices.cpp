#include "bulkedge/schrodinger_indices.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "bulkedge/error.hpp"
#include "bulkedge/ode_kernel.hpp"
#include "bulkedge/parallel.hpp"

namespace bulkedge {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

Eigen::Vector2d side_vector(const FloquetSplit& f, Side side) { return side == Side::plus ? f.v_decay : f.v_grow; }

}  // namespace

std::complex<double> theta_of(double u, double du) {
  const std::complex<double> a(du, -u), b(du, u);
  return a / b;
}

ThetaSample theta_bulk(const TrigPotential& V, double t, double E, double x, Side side,
                       const PropagationSettings& prop) {
  const Eigen::Vector2d v = side_vector(floquet_split(V, t, E, prop, x), side);
  return {theta_of(v(0), v(1)), x, t, E, side};
}

int zeros_in_cell(const TrigPotential& V, double t, double E, Side side, const PropagationSettings& prop) {
  const double a = -1e-9;
  Eigen::Vector2d y = side_vector(floquet_split(V, t, E, prop, a), side);
  double log_scale = 0.0;
  int count = 0;
  double last = y(0);
  auto W = [&V, t](double x) { return V(x - t); };
  auto observe = [&](double, const Eigen::Vector2d& s, double) {
    if (s(0) == 0.0) return;
    if (last != 0.0 && (s(0) > 0.0) != (last > 0.0)) ++count;
    last = s(0);
  };
  ode::integrate(y, log_scale, a, a + 1.0, {}, ode::hill_coefficient(W, E), prop, observe);
  return count;
}

SchrodingerSystem::SchrodingerSystem(SchrodingerModel model, int n_max, double lo, double hi)
    : model_(std::move(model)) {
  model_.prop.validate();
  SpectrumOptions opts;
  opts.prop = model_.prop;
  gaps_ = band_edges(model_.V, n_max, lo, hi, opts);
  for (const auto& p : model_.chi.points()) kinks_.push_back(p.first);
}

double SchrodingerSystem::scan_margin(const Gap& g) const { return std::min(1e-7, 1e-3 * g.width()); }

std::pair<int, int> SchrodingerSystem::maslov_indices(int n, std::optional<double> E) const {
  const Gap& g = gaps_.open_gap(n);
  const double e = E.value_or(g.mid());
  if (!(e < g.hi && e > g.lo)) throw Error(ErrorCode::energy_in_band, "energy " + num(e) + " is not inside gap " + std::to_string(n));
  int m[2];
  for (int s = 0; s < 2; ++s) {
    const Side side = s == 0 ? Side::plus : Side::minus;
    const CircleMap f = [&](double t) { return theta_bulk(model_.V, t, e, 0.0, side, model_.prop).value; };
    m[s] = winding_number(build_path(f, model_.refine_limit, 64));
  }
  return {m[0], m[1]};
}

int SchrodingerSystem::bulk_index(int n, std::optional<double> E) const {
  const auto [mp, mm] = maslov_indices(n, E);
  if (mp != mm)
    throw AssertionFailure("Maslov indices differ in gap " + std::to_string(n) + ": M+ = " + std::to_string(mp) +
                           ", M- = " + std::to_string(mm));
  return mp;
}

std::pair<std::complex<double>, std::complex<double>> SchrodingerSystem::edge_thetas(double t, double E,
                                                                                   double x) const {
  const auto& V = model_.V;
  const auto& chi = model_.chi;
  auto W = [&](double s) { return eval_edge(V, chi, t, s); };
  const auto A = ode::hill_coefficient(W, E);

  const double aR = std::max(chi.right_end(), x);
  Eigen::Vector2d yr = floquet_split(V, t, E, model_.prop, aR).v_decay;
  double lr = 0.0;
  ode::integrate(yr, lr, aR, x, kinks_, A, model_.prop);

  const double aL = std::min(chi.left_end(), x);
  Eigen::Vector2d yl = floquet_split(V, 0.0, E, model_.prop, aL).v_grow;
  double ll = 0.0;
  ode::integrate(yl, ll, aL, x, kinks_, A, model_.prop);

  return {theta_of(yr(0), yr(1)), theta_of(yl(0), yl(1))};
}

std::complex<double> SchrodingerSystem::omega(double t, double E, double x) const {
  const auto [p, m] = edge_thetas(t, E, x);
  return p * std::conj(m);
}

PhasePath SchrodingerSystem::omega_path(int n, std::optional<double> E) const {
  const Gap& g = gaps_.open_gap(n);
  const double e = E.value_or(g.mid());
  const CircleMap f = [&](double t) { return omega(t, e); };
  return build_path(f, model_.refine_limit, 64);
}

int SchrodingerSystem::edge_index(int n, std::optional<double> E) const { return winding_number(omega_path(n, E)); }

std::vector<EdgeEigenvalue> SchrodingerSystem::edge_eigenvalues_at(double t, int n, bool with_states) const {
  const Gap& g = gaps_.open_gap(n);
  if (!std::isfinite(g.lo)) return {};
  const auto roots = phase_roots([&](double E) { return omega(t, E); }, g.lo, g.hi, model_.grid_e, scan_margin(g),
                                 model_.refine_limit, +1);
  std::vector<EdgeEigenvalue> out;
  for (double E : roots) {
    EdgeEigenvalue ev;
    ev.E = E;
    ev.near_edge = std::min(E - g.lo, g.hi - E) < 1e-6;
    if (with_states) ev.state = edge_state(t, E);
    out.push_back(std::move(ev));
  }
  return out;
}

EdgeState SchrodingerSystem::edge_state(double t, double E) const {
  const auto& V = model_.V;
  const auto& chi = model_.chi;
  const double L = std::max(std::abs(chi.left_end()), std::abs(chi.right_end()));
  const double X = std::ceil(L) + 10.0 + (L - std::floor(L) == 0.5 ? 0.5 : 0.0);
  const int per_cell = 64;
  const int half = static_cast<int>(std::lround(X * per_cell));
  auto W = [&](double s) { return eval_edge(V, chi, t, s); };
  const auto A = ode::hill_coefficient(W, E);

  struct Raw {
    double u, du, ls;
  };
  auto sweep = [&](double start, const Eigen::Vector2d& v0, int dir) {
    std::vector<Raw> raw;
    Eigen::Vector2d y = v0;
    double ls = 0.0;
    raw.push_back({y(0), y(1), ls});
    for (int k = 1; k <= half; ++k) {
      const double from = start + dir * static_cast<double>(k - 1) / per_cell;
      const double to = k == half ? 0.0 : start + dir * static_cast<double>(k) / per_cell;
      ode::integrate(y, ls, from, to, kinks_, A, model_.prop);
      raw.push_back({y(0), y(1), ls});
    }
    return raw;
  };
  const auto fr = floquet_split(V, t, E, model_.prop, X);
  const auto fl = floquet_split(V, 0.0, E, model_.prop, -X);
  const auto right = sweep(X, fr.v_decay, -1);  // x = X .. 0
  const auto left = sweep(-X, fl.v_grow, +1);   // x = -X .. 0

  const Raw& r0 = right.back();
  const Raw& l0 = left.back();
  const double ratio = std::abs(r0.u) >= std::abs(r0.du) ? r0.u / l0.u : r0.du / l0.du;
  EdgeState st;
  st.E = E;
  st.t = t;
  for (int k = 0; k <= half; ++k) {
    const Raw& s = left[k];
    const double f = ratio * std::exp(s.ls - l0.ls);
    st.samples.push_back({-X + static_cast<double>(k) / per_cell, s.u * f, s.du * f});
  }
  for (int k = half - 1; k >= 0; --k) {
    const Raw& s = right[k];
    const double f = std::exp(s.ls - r0.ls);
    st.samples.push_back({X - static_cast<double>(k) / per_cell, s.u * f, s.du * f});
  }
  double norm2 = 0.0;
  for (std::size_t i = 0; i + 1 < st.samples.size(); ++i) {
    const double h = st.samples[i + 1][0] - st.samples[i][0];
    norm2 += 0.5 * h * (st.samples[i][1] * st.samples[i][1] + st.samples[i + 1][1] * st.samples[i + 1][1]);
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& s : st.samples) {
    s[1] *= inv;
    s[2] *= inv;
  }

  // Same cell phase, five cells apart, both inside the bulk regions.
  const int five = 5 * per_cell;
  auto lognorm = [](const Raw& s) { return std::log(std::hypot(s.u, s.du)) + s.ls; };
  st.decay_rate_right = (lognorm(right[five]) - lognorm(right[0])) / 5.0;
  st.decay_rate_left = (lognorm(left[five]) - lognorm(left[0])) / 5.0;
  st.expected_right = -std::log(std::abs(fr.lambda_decay));
  st.expected_left = std::log(std::abs(fl.lambda_grow));
  return st;
}

FlowResult SchrodingerSystem::domain_wall_flow(int n) const {
  const Gap& g = gaps_.open_gap(n);
  if (!std::isfinite(g.lo)) return {};
  FlowProblem pb;
  pb.lo = g.lo;
  pb.hi = g.hi;
  pb.grid_t = model_.grid_t;
  pb.eigenvalues = [&](double t) {
    std::vector<double> E;
    for (const auto& ev : edge_eigenvalues_at(t, n, false)) E.push_back(ev.E);
    return E;
  };
  pb.phase = [&](double t, double E) { return omega(t, E); };
  return compute_flow(pb);
}

FlowResult SchrodingerSystem::spectral_flow_domain_wall(int n) const {
  FlowResult r = domain_wall_flow(n);
  const int I = edge_index(n);
  if (r.flow != I)
    throw AssertionFailure("gap " + std::to_string(n) + ": domain-wall spectral flow " + std::to_string(r.flow) +
                           " differs from edge index " + std::to_string(I));
  return r;
}

std::vector<double> SchrodingerSystem::dirichlet_eigenvalues_at(double t, int n, DirichletKind kind) const {
  const Gap& g = gaps_.open_gap(n);
  if (!std::isfinite(g.lo)) return {};
  const Side side = kind == DirichletKind::eigen ? Side::plus : Side::minus;
  return phase_roots([&](double E) { return theta_bulk(model_.V, t, E, 0.0, side, model_.prop).value; }, g.lo, g.hi,
                     model_.grid_e, scan_margin(g), model_.refine_limit, side == Side::plus ? +1 : -1);
}

DirichletFlowResult SchrodingerSystem::dirichlet_flow(int n) const {
  const Gap& g = gaps_.open_gap(n);
  if (!std::isfinite(g.lo)) return {};
  DirichletFlowResult out;
  for (int k = 0; k < 2; ++k) {
    const DirichletKind kind = k == 0 ? DirichletKind::eigen : DirichletKind::resonant;
    const Side side = k == 0 ? Side::plus : Side::minus;
    FlowProblem pb;
    pb.lo = g.lo;
    pb.hi = g.hi;
    pb.grid_t = model_.grid_t;
    pb.eigenvalues = [&, kind](double t) { return dirichlet_eigenvalues_at(t, n, kind); };
    pb.phase = [&, side](double t, double E) { return theta_bulk(model_.V, t, E, 0.0, side, model_.prop).value; };
    (k == 0 ? out.eigen : out.resonant) = compute_flow(pb);
  }

  auto extreme_slope = [](const FlowResult& r, bool want_max) {
    std::map<int, std::vector<FlowSample>> by_branch;
    for (const auto& s : r.samples) by_branch[s.branch].push_back(s);
    double m = want_max ? -INFINITY : INFINITY;
    for (const auto& [id, v] : by_branch)
      for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const double slope = (v[i + 1].E - v[i].E) / (v[i + 1].t - v[i].t);
        m = want_max ? std::max(m, slope) : std::min(m, slope);
      }
    return m;
  };
  out.max_eigen_slope = extreme_slope(out.eigen, true);
  out.min_resonant_slope = extreme_slope(out.resonant, false);

  // Union of both kinds on the common grid against the unit-cell Dirichlet eigenvalue.
  const int N = std::max(2, model_.grid_t);
  std::map<int, std::vector<double>> grid_union;
  for (const auto* r : {&out.eigen, &out.resonant})
    for (const auto& s : r->samples) {
      const double j = s.t * N;
      if (std::abs(j - std::round(j)) < 1e-9) grid_union[static_cast<int>(std::lround(j))].push_back(s.E);
    }
  const auto errs = parallel_map(static_cast<std::size_t>(N) + 1, [&](std::size_t j) {
    const double delta = cell_dirichlet_eigenvalue(model_.V, static_cast<double>(j) / N, gaps_, n, model_.prop);
    const auto it = grid_union.find(static_cast<int>(j));
    if (it == grid_union.end()) {
      const double to_edge = std::min(delta - g.lo, g.hi - delta);
      return to_edge < 1e-4 ? 0.0 : to_edge;
    }
    double e = 0.0;
    for (double E : it->second) e = std::max(e, std::abs(E - delta));
    return e;
  });
  out.join_error = *std::max_element(errs.begin(), errs.end());
  return out;
}

DirichletFlowResult SchrodingerSystem::dirichlet_spectral_flow(int n) const {
  DirichletFlowResult out = dirichlet_flow(n);

  const std::string tag = "gap " + std::to_string(n) + ": ";
  if (!(out.max_eigen_slope < 0.0))
    throw AssertionFailure(tag + "Dirichlet eigenvalue branch with non-negative slope " + num(out.max_eigen_slope));
  if (!(out.min_resonant_slope > 0.0))
    throw AssertionFailure(tag + "resonant branch with non-positive slope " + num(out.min_resonant_slope));
  if (!(out.join_error < 1e-4))
    throw AssertionFailure(tag + "eigenvalue and resonant branches miss the cell Dirichlet curve by " +
                           num(out.join_error));
  return out;
}

}  // namespace bulkedge
