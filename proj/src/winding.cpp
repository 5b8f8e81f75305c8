#include "bulkedge/winding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "bulkedge/error.hpp"
#include "bulkedge/parallel.hpp"

namespace bulkedge {

namespace {

constexpr double pi = std::numbers::pi;

std::complex<double> unit(std::complex<double> z, double t) {
  const double r = std::abs(z);
  if (!(r > 0.0) || !std::isfinite(r))
    throw Error(ErrorCode::non_regular_value, "circle map vanishes or is not finite at t = " + std::to_string(t));
  return z / r;
}

double phase_step(std::complex<double> from, std::complex<double> to) { return std::arg(to * std::conj(from)); }

}  // namespace

PhasePath build_path(const CircleMap& f, const PathOptions& options) {
  const int n0 = std::max(2, options.initial_samples);
  const double t0 = options.t0, t1 = options.t1;
  std::vector<double> ts(n0);
  for (int i = 0; i < n0; ++i) ts[i] = i == n0 - 1 ? t1 : t0 + (t1 - t0) * i / (n0 - 1);
  std::vector<std::complex<double>> zs = parallel_map(ts.size(), [&](std::size_t i) { return unit(f(ts[i]), ts[i]); });
  std::vector<int> depth(ts.size() - 1, 0);
  std::vector<char> verified(ts.size() - 1, options.check_midpoints ? 0 : 1);

  auto resolved = [&](std::complex<double> a, std::complex<double> b) {
    const double step = phase_step(a, b);
    return std::abs(step) < pi / 2 && step * options.orientation >= -1e-8;
  };

  for (;;) {
    std::vector<std::size_t> coarse;
    std::vector<char> fine;
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
      const bool ok = resolved(zs[i], zs[i + 1]);
      if (!ok || !verified[i]) {
        coarse.push_back(i);
        fine.push_back(ok);
      }
    }
    if (coarse.empty()) break;
    for (std::size_t j = 0; j < coarse.size(); ++j)
      if (!fine[j] && depth[coarse[j]] >= options.refine_limit)
        throw Error(ErrorCode::refinement_exhausted,
                    "phase path still unresolved near t = " + std::to_string(ts[coarse[j]]) + " after " +
                        std::to_string(options.refine_limit) + " refinements");
    const auto mids = parallel_map(coarse.size(), [&](std::size_t j) {
      const double tm = 0.5 * (ts[coarse[j]] + ts[coarse[j] + 1]);
      return std::make_pair(tm, unit(f(tm), tm));
    });
    std::vector<double> nts;
    std::vector<std::complex<double>> nzs;
    std::vector<int> ndepth;
    std::vector<char> nverified;
    std::size_t c = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      nts.push_back(ts[i]);
      nzs.push_back(zs[i]);
      if (i + 1 == ts.size()) break;
      if (c < coarse.size() && coarse[c] == i) {
        const auto zm = mids[c].second;
        // A midpoint that agrees with the coarse step confirms the interval.
        const bool consistent = fine[c] && resolved(zs[i], zm) && resolved(zm, zs[i + 1]) &&
                                std::abs(phase_step(zs[i], zm) + phase_step(zm, zs[i + 1]) -
                                         phase_step(zs[i], zs[i + 1])) < 1e-9;
        if (consistent && depth[i] >= options.refine_limit) {
          ndepth.push_back(depth[i]);
          nverified.push_back(1);
          ++c;
          continue;
        }
        nts.push_back(mids[c].first);
        nzs.push_back(zm);
        const int d = consistent ? depth[i] : depth[i] + 1;
        ndepth.insert(ndepth.end(), {d, d});
        nverified.insert(nverified.end(), {static_cast<char>(consistent), static_cast<char>(consistent)});
        ++c;
      } else {
        ndepth.push_back(depth[i]);
        nverified.push_back(verified[i]);
      }
    }
    ts = std::move(nts);
    zs = std::move(nzs);
    depth = std::move(ndepth);
    verified = std::move(nverified);
  }

  PhasePath path;
  path.samples.reserve(ts.size());
  double alpha = std::arg(zs[0]);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (i > 0) alpha += phase_step(zs[i - 1], zs[i]);
    path.samples.push_back({ts[i], zs[i], alpha});
  }
  path.closed = std::abs(zs.back() - zs.front()) < 1e-6;
  return path;
}

PhasePath build_path(const CircleMap& f, int refine_limit, int initial_samples) {
  PathOptions o;
  o.refine_limit = refine_limit;
  o.initial_samples = initial_samples;
  return build_path(f, o);
}

double total_turns(const PhasePath& path) {
  if (path.samples.empty()) return 0.0;
  return (path.samples.back().alpha - path.samples.front().alpha) / (2.0 * pi);
}

int winding_number(const PhasePath& path) {
  if (!path.closed) throw Error(ErrorCode::non_integer_winding, "winding number requested for an open path");
  const double w = total_turns(path);
  const double r = std::round(w);
  if (std::abs(w - r) >= 0.01)
    throw Error(ErrorCode::non_integer_winding, "turn count " + std::to_string(w) + " is not an integer");
  return static_cast<int>(r);
}

std::vector<Crossing> crossings(const PhasePath& path, const CircleMap& f, std::complex<double> z, double slope_tol,
                                double fd_step) {
  std::vector<Crossing> out;
  const auto& s = path.samples;
  if (s.size() < 2) return out;
  const double beta = std::arg(z);
  const double t_lo = s.front().t, t_hi = s.back().t;
  auto level = [&](double alpha) { return std::floor((alpha - beta) / (2.0 * pi)); };

  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double la = level(s[i].alpha), lb = level(s[i + 1].alpha);
    if (la == lb) continue;
    const int direction = lb > la ? 1 : -1;
    const double target = beta + 2.0 * pi * std::max(la, lb);
    const auto& left = s[i];
    auto g = [&](double t) {
      if (t == left.t) return left.alpha - target;
      return left.alpha + phase_step(left.z, f(t)) - target;
    };
    double ga = left.alpha - target, gb = s[i + 1].alpha - target;
    double root;
    if (gb == 0.0) {
      root = s[i + 1].t;
    } else {
      std::uintmax_t iters = 200;
      auto tol = boost::math::tools::eps_tolerance<double>(50);
      auto r = boost::math::tools::toms748_solve(g, left.t, s[i + 1].t, ga, gb, tol, iters);
      root = 0.5 * (r.first + r.second);
    }

    double a = root - fd_step, b = root + fd_step;
    const double span = t_hi - t_lo;
    std::complex<double> fa, fb;
    if (a < t_lo) {
      fa = path.closed ? f(a + span) : f(root);
      if (!path.closed) a = root;
    } else {
      fa = f(a);
    }
    if (b > t_hi) {
      fb = path.closed ? f(b - span) : f(root);
      if (!path.closed) b = root;
    } else {
      fb = f(b);
    }
    const double slope = phase_step(fa, fb) / (b - a);
    if (!(std::abs(slope) >= slope_tol))
      throw Error(ErrorCode::non_regular_value,
                  "tangential crossing near t = " + std::to_string(root) + " (slope " + std::to_string(slope) + ")");
    const int sign = slope > 0.0 ? 1 : -1;
    if (sign != direction)
      throw Error(ErrorCode::non_regular_value,
                  "crossing orientation ambiguous near t = " + std::to_string(root));
    if (path.closed && root >= t_hi - 1e-12 * std::max(1.0, std::abs(t_hi))) root = t_lo;
    out.push_back({root, sign, z / std::abs(z)});
  }
  std::sort(out.begin(), out.end(), [](const Crossing& a, const Crossing& b) { return a.t < b.t; });
  return out;
}

}  // namespace bulkedge
