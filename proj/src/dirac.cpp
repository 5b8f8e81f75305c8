#include "bulkedge/dirac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
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

double modulus_gap(const Eigen::Vector2cd& v) {
  const double a = std::abs(v(0)), b = std::abs(v(1));
  return std::abs(a - b) / std::max(a, b);
}

std::complex<double> theta_checked(const Eigen::Vector2cd& v, double t, double E) {
  if (modulus_gap(v) > 1e-5)
    throw Error(ErrorCode::modulus_deviation, "|u_down| and |u_up| differ by " + num(modulus_gap(v)) +
                                                  " at t = " + num(t) + ", E = " + num(E));
  return v(1) / v(0);
}

DiracFloquetSplit split_at(const TrigPotential& V, double t, double E, const PropagationSettings& prop, double x) {
  return dirac_floquet_split(monodromy_dirac(V, t, E, prop, x));
}

}  // namespace

DiracTheta dirac_theta(const TrigPotential& V, const SwitchFunction* chi, double t, double E, double x, Side side,
                       const PropagationSettings& prop) {
  Eigen::Vector2cd v;
  if (!chi) {
    const auto f = split_at(V, t, E, prop, x);
    v = side == Side::plus ? f.v_decay : f.v_grow;
  } else {
    const DiracMassProfile mass{&V, chi, t};
    const auto A = ode::dirac_coefficient(mass, E);
    std::vector<double> kinks;
    for (const auto& p : chi->points()) kinks.push_back(p.first);
    double ls = 0.0;
    if (side == Side::plus) {
      const double a = std::max(chi->right_end(), x);
      v = split_at(V, t, E, prop, a).v_decay;
      ode::integrate(v, ls, a, x, kinks, A, prop);
    } else {
      const double a = std::min(chi->left_end(), x);
      v = split_at(V, 0.0, E, prop, a).v_grow;
      ode::integrate(v, ls, a, x, kinks, A, prop);
    }
  }
  return {theta_checked(v, t, E), x, t, E, side};
}

double decaying_modulus_deviation(const TrigPotential& V, const SwitchFunction* chi, double t, double E, int cells,
                                  const PropagationSettings& prop) {
  const double a = chi ? chi->right_end() + cells : static_cast<double>(cells);
  const double b = chi ? chi->left_end() : 0.0;
  Eigen::Vector2cd v = split_at(V, t, E, prop, a).v_decay;
  const DiracMassProfile mass{&V, chi, t};
  std::vector<double> kinks;
  if (chi)
    for (const auto& p : chi->points()) kinks.push_back(p.first);
  double ls = 0.0, worst = modulus_gap(v);
  auto observe = [&](double, const Eigen::Vector2cd& s, double) { worst = std::max(worst, modulus_gap(s)); };
  ode::integrate(v, ls, a, b, kinks, ode::dirac_coefficient(mass, E), prop, observe);
  return worst;
}

DiracSystem::DiracSystem(DiracModel model, double lo, double hi) : model_(std::move(model)) {
  model_.prop.validate();
  SpectrumOptions opts;
  opts.prop = model_.prop;
  gaps_ = dirac_gap_table(model_.V, lo, hi, opts);
  for (const auto& p : model_.chi.points()) kinks_.push_back(p.first);
}

double DiracSystem::scan_margin(const Gap& g) const { return std::min(1e-7, 1e-3 * g.width()); }

std::pair<int, int> DiracSystem::maslov_indices(int n, std::optional<double> E) const {
  const Gap& g = gaps_.open_gap(n);
  const double e = E.value_or(g.mid());
  if (!g.contains(e)) throw Error(ErrorCode::energy_in_band, "energy " + num(e) + " is not inside gap " + std::to_string(n));
  int m[2];
  for (int s = 0; s < 2; ++s) {
    const Side side = s == 0 ? Side::plus : Side::minus;
    const CircleMap f = [&](double t) { return dirac_theta(model_.V, nullptr, t, e, 0.0, side, model_.prop).value; };
    m[s] = winding_number(build_path(f, model_.refine_limit, 64));
  }
  return {m[0], m[1]};
}

int DiracSystem::bulk_index(int n, std::optional<double> E) const {
  const auto [mp, mm] = maslov_indices(n, E);
  if (mp != mm)
    throw AssertionFailure("Dirac Maslov indices differ in gap " + std::to_string(n) + ": " + std::to_string(mp) +
                           " vs " + std::to_string(mm));
  return mp;
}

std::pair<Eigen::Vector2cd, Eigen::Vector2cd> DiracSystem::edge_spinors(double t, double E, double x,
                                                                        double* log_right, double* log_left) const {
  const auto& V = model_.V;
  const DiracMassProfile mass{&V, &model_.chi, t};
  const auto A = ode::dirac_coefficient(mass, E);
  const double aR = std::max(model_.chi.right_end(), x);
  Eigen::Vector2cd r = split_at(V, t, E, model_.prop, aR).v_decay;
  double lr = 0.0;
  ode::integrate(r, lr, aR, x, kinks_, A, model_.prop);
  const double aL = std::min(model_.chi.left_end(), x);
  Eigen::Vector2cd l = split_at(V, 0.0, E, model_.prop, aL).v_grow;
  double ll = 0.0;
  ode::integrate(l, ll, aL, x, kinks_, A, model_.prop);
  if (log_right) *log_right = lr;
  if (log_left) *log_left = ll;
  return {r, l};
}

std::complex<double> DiracSystem::omega(double t, double E, double x) const {
  const auto [r, l] = edge_spinors(t, E, x);
  const std::complex<double> p = theta_checked(r, t, E), m = theta_checked(l, t, E);
  return p * std::conj(m);
}

PhasePath DiracSystem::omega_path(int n, std::optional<double> E) const {
  const Gap& g = gaps_.open_gap(n);
  const double e = E.value_or(g.mid());
  const CircleMap f = [&](double t) { return omega(t, e); };
  return build_path(f, model_.refine_limit, 64);
}

int DiracSystem::edge_index(int n, std::optional<double> E) const { return winding_number(omega_path(n, E)); }

std::vector<double> DiracSystem::edge_eigenvalues_at(double t, int n) const {
  const Gap& g = gaps_.open_gap(n);
  return phase_roots([&](double E) { return omega(t, E); }, g.lo, g.hi, model_.grid_e, scan_margin(g),
                     model_.refine_limit, +1);
}

FlowResult DiracSystem::flow(int n) const {
  const Gap& g = gaps_.open_gap(n);
  FlowProblem pb;
  pb.lo = g.lo;
  pb.hi = g.hi;
  pb.grid_t = model_.grid_t;
  pb.eigenvalues = [&](double t) { return edge_eigenvalues_at(t, n); };
  pb.phase = [&](double t, double E) { return omega(t, E); };
  return compute_flow(pb);
}

FlowResult DiracSystem::spectral_flow(int n) const {
  FlowResult r = flow(n);
  const int I = edge_index(n);
  if (r.flow != I)
    throw AssertionFailure("Dirac gap " + std::to_string(n) + ": spectral flow " + std::to_string(r.flow) +
                           " differs from edge index " + std::to_string(I));
  return r;
}

int DiracSystem::zero_gap() const {
  for (int n = 1; n <= gaps_.n_max(); ++n)
    if (gaps_.gaps[n].open && gaps_.gaps[n].contains(0.0)) return n;
  throw Error(ErrorCode::zero_in_spectrum, "E = 0 is not inside an open gap of the bulk Dirac operator");
}

ZeroMode DiracSystem::zero_mode() const {
  const Gap& g = gaps_.gaps[zero_gap()];
  const double w = g.width() / 3.0;
  const double lo = std::max(g.lo, -w), hi = std::min(g.hi, w);
  const auto roots = phase_roots([&](double E) { return omega(0.5, E); }, lo, hi, model_.grid_e, 0.0,
                                 model_.refine_limit, +1);
  if (roots.empty()) throw AssertionFailure("no eigenvalue of the domain-wall operator near 0 at t = 1/2");
  const double E = *std::min_element(roots.begin(), roots.end(),
                                     [](double a, double b) { return std::abs(a) < std::abs(b); });
  if (!(std::abs(E) < 1e-8)) throw AssertionFailure("eigenvalue nearest 0 at t = 1/2 is " + num(E));
  return spinor_profile(0.5, E);
}

ZeroMode DiracSystem::spinor_profile(double t, double E) const {
  const auto& V = model_.V;
  const auto& chi = model_.chi;
  const double L = std::max(std::abs(chi.left_end()), std::abs(chi.right_end()));
  const double X = std::ceil(L) + 10.0;
  const int per_cell = 64;
  const int half = static_cast<int>(std::lround(X * per_cell));
  const DiracMassProfile mass{&V, &chi, t};
  const auto A = ode::dirac_coefficient(mass, E);

  struct Raw {
    Eigen::Vector2cd v;
    double ls;
  };
  auto sweep = [&](double start, const Eigen::Vector2cd& v0, int dir) {
    std::vector<Raw> raw;
    Eigen::Vector2cd y = v0;
    double ls = 0.0;
    raw.push_back({y, ls});
    for (int k = 1; k <= half; ++k) {
      const double from = start + dir * static_cast<double>(k - 1) / per_cell;
      const double to = k == half ? 0.0 : start + dir * static_cast<double>(k) / per_cell;
      ode::integrate(y, ls, from, to, kinks_, A, model_.prop);
      raw.push_back({y, ls});
    }
    return raw;
  };
  const auto fr = split_at(V, t, E, model_.prop, X);
  const auto fl = split_at(V, 0.0, E, model_.prop, -X);
  const auto right = sweep(X, fr.v_decay, -1);
  const auto left = sweep(-X, fl.v_grow, +1);

  const Raw& r0 = right.back();
  const Raw& l0 = left.back();
  const std::complex<double> ratio = l0.v.dot(r0.v) / l0.v.squaredNorm();

  ZeroMode zm;
  zm.E = E;
  zm.t = t;
  for (int k = 0; k <= half; ++k) {
    const Eigen::Vector2cd v = left[k].v * (ratio * std::exp(left[k].ls - l0.ls));
    zm.samples.push_back({-X + static_cast<double>(k) / per_cell, v(0), v(1)});
  }
  for (int k = half - 1; k >= 0; --k) {
    const Eigen::Vector2cd v = right[k].v * std::exp(right[k].ls - r0.ls);
    zm.samples.push_back({X - static_cast<double>(k) / per_cell, v(0), v(1)});
  }
  double norm2 = 0.0;
  auto dens = [](const ZeroMode::Sample& s) { return std::norm(s.up) + std::norm(s.down); };
  for (std::size_t i = 0; i + 1 < zm.samples.size(); ++i)
    norm2 += 0.5 * (zm.samples[i + 1].x - zm.samples[i].x) * (dens(zm.samples[i]) + dens(zm.samples[i + 1]));
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& s : zm.samples) {
    s.up *= inv;
    s.down *= inv;
  }

  const int five = 5 * per_cell;
  auto lognorm = [](const Raw& s) { return std::log(s.v.norm()) + s.ls; };
  zm.decay_rate_right = (lognorm(right[five]) - lognorm(right[0])) / 5.0;
  zm.decay_rate_left = (lognorm(left[five]) - lognorm(left[0])) / 5.0;
  zm.expected_right = -std::log(std::abs(fr.lambda_decay));
  zm.expected_left = std::log(std::abs(fl.lambda_grow));
  return zm;
}

int DiracSystem::mirror_gap(int n) const {
  const Gap& g = gaps_.open_gap(n);
  for (int m = 1; m <= gaps_.n_max(); ++m) {
    const Gap& h = gaps_.gaps[m];
    if (std::abs(h.lo + g.hi) < 1e-8 && std::abs(h.hi + g.lo) < 1e-8) return m;
  }
  throw AssertionFailure("gap " + std::to_string(n) + " has no mirror image in the scanned window");
}

double DiracSystem::symmetry_check(int n, int N) const {
  const int m = mirror_gap(n);
  const Gap& g = gaps_.gaps[n];
  auto keep = [&](double E) { return std::min(E - g.lo, g.hi - E) >= 1e-6; };
  const auto dist = parallel_map(static_cast<std::size_t>(N) + 1, [&](std::size_t j) {
    const double t = static_cast<double>(j) / N;
    std::vector<double> a, b;
    for (double E : edge_eigenvalues_at(t, n))
      if (keep(E)) a.push_back(E);
    for (double E : edge_eigenvalues_at(1.0 - t, m))
      if (keep(-E)) b.push_back(-E);
    if (a.empty() && b.empty()) return 0.0;
    if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
    auto directed = [](const std::vector<double>& p, const std::vector<double>& q) {
      double d = 0.0;
      for (double x : p) {
        double best = INFINITY;
        for (double y : q) best = std::min(best, std::abs(x - y));
        d = std::max(d, best);
      }
      return d;
    };
    return std::max(directed(a, b), directed(b, a));
  });
  return *std::max_element(dist.begin(), dist.end());
}

}  // namespace bulkedge
