#include "bulkedge/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bulkedge/error.hpp"
#include "bulkedge/parallel.hpp"

namespace bulkedge {

namespace {

struct Node {
  double t = 0.0;
  std::vector<double> E;
};

struct Choice {
  int s = 0;  // a[i] continues as b[i + s]
  int matches = -1;
  double cost = 0.0;
  bool found = false;
  bool ambiguous = true;
};

Choice choose_offset(const std::vector<double>& a, const std::vector<double>& b, double lo, double hi, double zone) {
  const int p = static_cast<int>(a.size()), q = static_cast<int>(b.size());
  const double w = hi - lo, band = zone * w;
  Choice best, second;
  for (int s = -p; s <= q; ++s) {
    bool valid = true;
    int matches = 0;
    double cost = 0.0;
    for (int i = 0; i < p && valid; ++i) {
      const int j = i + s;
      if (j < 0) valid = a[i] - lo < band;
      else if (j >= q) valid = hi - a[i] < band;
      else {
        ++matches;
        cost = std::max(cost, std::abs(a[i] - b[j]));
      }
    }
    for (int j = 0; j < q && valid; ++j) {
      const int i = j - s;
      if (i < 0) valid = b[j] - lo < band;
      else if (i >= p) valid = hi - b[j] < band;
    }
    if (!valid || cost >= 0.25 * w) continue;
    Choice c{s, matches, cost, true, false};
    auto better = [](const Choice& x, const Choice& y) {
      if (!y.found) return true;
      if (x.matches != y.matches) return x.matches > y.matches;
      return x.cost < y.cost;
    };
    if (better(c, best)) {
      second = best;
      best = c;
    } else if (better(c, second)) {
      second = c;
    }
  }
  if (!best.found) return best;
  best.ambiguous = second.found && second.matches == best.matches && second.cost < 2.0 * best.cost + 1e-12 * w;
  return best;
}

double arg_ratio(std::complex<double> num, std::complex<double> den) { return std::arg(num * std::conj(den)); }

}  // namespace

std::vector<double> phase_roots(const std::function<std::complex<double>(double)>& f, double lo, double hi,
                                int initial_samples, double margin, int refine_limit, int orientation) {
  const double w = hi - lo;
  if (!(w > 2.0 * margin)) return {};
  auto energy = [&](double s) { return lo + 0.5 * w * (1.0 - std::cos(std::numbers::pi * s)); };
  const double s_m = margin > 0.0 ? std::acos(1.0 - 2.0 * margin / w) / std::numbers::pi : 0.0;
  const CircleMap g = [&](double s) { return f(energy(s)); };
  PathOptions o;
  o.initial_samples = initial_samples;
  o.refine_limit = refine_limit;
  o.t0 = s_m;
  o.t1 = 1.0 - s_m;
  o.orientation = orientation;
  const PhasePath path = build_path(g, o);
  std::vector<double> roots;
  for (const Crossing& c : crossings(path, g, 1.0)) roots.push_back(energy(c.t));
  std::sort(roots.begin(), roots.end());
  return roots;
}

FlowResult compute_flow(const FlowProblem& pb) {
  if (!(pb.hi > pb.lo)) throw Error(ErrorCode::gap_closed, "flow requested for an empty gap");
  const int N = std::max(2, pb.grid_t);
  const double w = pb.hi - pb.lo;

  std::vector<Node> nodes(N + 1);
  const auto lists = parallel_map(nodes.size(), [&](std::size_t j) { return pb.eigenvalues(static_cast<double>(j) / N); });
  for (int j = 0; j <= N; ++j) nodes[j] = {static_cast<double>(j) / N, lists[j]};

  FlowResult out;
  std::vector<int> offsets;
  const double min_dt = 1.0 / (N * std::ldexp(1.0, pb.max_refine));
  for (std::size_t i = 0; i + 1 < nodes.size();) {
    const Choice c = choose_offset(nodes[i].E, nodes[i + 1].E, pb.lo, pb.hi, pb.edge_zone);
    const double dt = nodes[i + 1].t - nodes[i].t;
    if (c.ambiguous && dt > 1.5 * min_dt) {
      const double tm = 0.5 * (nodes[i].t + nodes[i + 1].t);
      nodes.insert(nodes.begin() + static_cast<std::ptrdiff_t>(i) + 1, Node{tm, pb.eigenvalues(tm)});
      ++out.refinements;
      continue;
    }
    if (!c.found)
      throw Error(ErrorCode::branch_matching,
                  "eigenvalue branches cannot be matched between t = " + std::to_string(nodes[i].t) + " and t = " +
                      std::to_string(nodes[i + 1].t));
    offsets.push_back(c.s);
    ++i;
  }

  // Branch labels.
  std::vector<std::vector<int>> ids(nodes.size());
  int next_id = 0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const int q = static_cast<int>(nodes[j].E.size());
    ids[j].assign(q, -1);
    for (int k = 0; k < q; ++k) {
      if (j > 0) {
        const int i = k - offsets[j - 1];
        if (i >= 0 && i < static_cast<int>(nodes[j - 1].E.size())) ids[j][k] = ids[j - 1][i];
      }
      if (ids[j][k] < 0) ids[j][k] = next_id++;
      const FlowSample s{nodes[j].t, nodes[j].E[k], ids[j][k]};
      out.samples.push_back(s);
      if (std::min(s.E - pb.lo, pb.hi - s.E) < pb.near_edge) out.near_edge.push_back(s);
    }
  }
  out.branch_count = next_id;

  const double mid = 0.5 * (pb.lo + pb.hi);
  std::string last_problem;
  for (int attempt = 0; attempt < 10; ++attempt) {
    const int k = (attempt + 1) / 2;
    const double E_star = mid + (attempt % 2 == 1 ? 1.0 : -1.0) * 0.03 * k * w;

    // Grid crossings of E_star, grouped by interval.
    std::vector<std::pair<std::size_t, int>> hits;  // (interval, net downward count)
    std::vector<int> counts;
    for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
      int net = 0, count = 0;
      const auto& a = nodes[j].E;
      const auto& b = nodes[j + 1].E;
      for (std::size_t i = 0; i < a.size(); ++i) {
        const long jj = static_cast<long>(i) + offsets[j];
        if (jj < 0 || jj >= static_cast<long>(b.size())) continue;
        const bool above_a = a[i] > E_star, above_b = b[jj] > E_star;
        if (above_a == above_b) continue;
        ++count;
        net += above_a ? 1 : -1;
      }
      if (count > 0) {
        hits.emplace_back(j, net);
        counts.push_back(count);
      }
    }

    try {
      std::vector<FlowCrossing> found;
      int flow = 0;
      for (std::size_t h = 0; h < hits.size(); ++h) {
        const std::size_t j = hits[h].first;
        const CircleMap g = [&](double t) { return pb.phase(t, E_star); };
        PathOptions o;
        o.initial_samples = 5;
        o.refine_limit = 24;
        o.t0 = nodes[j].t;
        o.t1 = nodes[j + 1].t;
        const auto cr = crossings(build_path(g, o), g, 1.0);
        int local = 0;
        for (const Crossing& c : cr) {
          const double ht = 1e-6, he = 1e-6 * std::max(1.0, w);
          const double dphi_dt = arg_ratio(pb.phase(c.t + ht, E_star), pb.phase(c.t - ht, E_star)) / (2 * ht);
          const double dphi_dE = arg_ratio(pb.phase(c.t, E_star + he), pb.phase(c.t, E_star - he)) / (2 * he);
          const double slope = -dphi_dt / dphi_dE;
          if (!(std::abs(slope) >= 1e-6) || !std::isfinite(slope))
            throw Error(ErrorCode::non_regular_value, "branch tangent to E = " + std::to_string(E_star));
          local += slope < 0.0 ? 1 : -1;
          found.push_back({c.t, E_star, slope, c.sign});
        }
        if (static_cast<int>(cr.size()) != counts[h] || local != hits[h].second)
          throw Error(ErrorCode::non_regular_value,
                      "grid and phase crossings disagree near t = " + std::to_string(nodes[j].t));
        flow += local;
      }
      out.flow = flow;
      out.E_star = E_star;
      out.perturbations = attempt;
      out.crossings = std::move(found);
      return out;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::non_regular_value && e.code() != ErrorCode::refinement_exhausted) throw;
      last_problem = e.what();
    }
  }
  throw Error(ErrorCode::no_regular_energy, "no regular energy found after 10 perturbations: " + last_problem);
}

}  // namespace bulkedge
