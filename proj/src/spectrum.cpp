#include "bulkedge/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "bulkedge/bloch.hpp"
#include "bulkedge/error.hpp"
#include "bulkedge/parallel.hpp"

namespace bulkedge {

namespace {

template <class F>
double bracket_root(F&& f, double a, double b, double fa, double fb) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  std::uintmax_t iters = 200;
  auto tol = boost::math::tools::eps_tolerance<double>(48);
  auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
  return 0.5 * (r.first + r.second);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// Unit eigenvector of a 2x2 matrix for a known eigenvalue.
template <class Mat, class Vec>
Vec eigvec2(const Mat& T, typename Mat::Scalar lambda) {
  Vec r1(T(0, 1), lambda - T(0, 0));
  Vec r2(lambda - T(1, 1), T(1, 0));
  Vec v = r1.norm() >= r2.norm() ? r1 : r2;
  return v / v.norm();
}

}  // namespace

const Gap& GapTable::open_gap(int n) const {
  if (n < 0 || n >= static_cast<int>(gaps.size()))
    throw Error(ErrorCode::gap_closed, "gap " + std::to_string(n) + " is outside the computed gap table");
  if (!gaps[n].open) throw Error(ErrorCode::gap_closed, "gap " + std::to_string(n) + " is closed");
  return gaps[n];
}

GapTable band_edges(const TrigPotential& V, int n_max, double lo, double hi, const SpectrumOptions& options) {
  if (n_max < 0) throw Error(ErrorCode::config, "n_max must be non-negative");
  PropagationSettings prop = options.prop;
  prop.rel_tol = std::min(prop.rel_tol, 1e-13);
  prop.abs_tol = std::min(prop.abs_tol, 1e-15);
  auto delta = [&](double E) { return discriminant(V, E, prop); };

  // Below min V every solution is non-oscillatory, so Delta > 2 there.
  const double E0 = std::min(lo, V.min_value() - 1.0);
  const double ds = 0.02;
  std::vector<double> zeros;
  double top = hi;
  for (int expansion = 0;; ++expansion) {
    const double smax = std::sqrt(top - E0);
    const std::size_t count = static_cast<std::size_t>(std::ceil(smax / ds)) + 1;
    auto energy = [&](std::size_t i) {
      const double s = std::min(smax, static_cast<double>(i) * ds);
      return E0 + s * s;
    };
    const std::vector<double> d = parallel_map(count, [&](std::size_t i) { return delta(energy(i)); });
    zeros.clear();
    for (std::size_t i = 0; i + 1 < count && static_cast<int>(zeros.size()) < n_max + 1; ++i) {
      if ((d[i] > 0.0) != (d[i + 1] > 0.0) || d[i + 1] == 0.0) {
        zeros.push_back(bracket_root(delta, energy(i), energy(i + 1), d[i], d[i + 1]));
        if (d[i + 1] == 0.0) ++i;
      }
    }
    if (static_cast<int>(zeros.size()) >= n_max + 1) break;
    if (expansion == 6)
      throw Error(ErrorCode::window_too_small,
                  "could not locate " + std::to_string(n_max + 1) + " bands below E = " + fmt(top));
    top = E0 + 4.0 * (top - E0);
  }

  GapTable table;
  table.gap_tol = options.gap_tol;
  const double d0 = delta(E0);
  auto f_plus = [&](double E) { return delta(E) - 2.0; };
  const double e1m = bracket_root(f_plus, E0, zeros[0], d0 - 2.0, delta(zeros[0]) - 2.0);
  table.gaps.push_back({0, -std::numeric_limits<double>::infinity(), e1m, true});

  std::vector<double> lower{e1m};  // E_n^- for n = 1..n_max+1
  std::vector<double> upper;       // E_n^+ for n = 1..n_max
  for (int n = 1; n <= n_max; ++n) {
    const double a = zeros[n - 1], b = zeros[n];
    const double sign = (n % 2 == 1) ? -1.0 : 1.0;  // gap n has sign(Delta) = (-1)^n
    auto g = [&](double E) { return -sign * delta(E); };
    auto ext = boost::math::tools::brent_find_minima(g, a, b, 40);
    const double Estar = ext.first;
    const double excess = -ext.second - 2.0;
    auto f = [&](double E) { return delta(E) - 2.0 * sign; };
    double En_plus = Estar, En1_minus = Estar;
    bool open = false;
    if (!(excess > options.excess_tol)) {
      table.warnings.push_back("gap " + std::to_string(n) + ": |Delta| exceeds 2 by at most " + fmt(std::max(excess, 0.0)) +
                               ", reported closed");
    } else {
      const double fs = f(Estar);
      En_plus = bracket_root(f, a, Estar, f(a), fs);
      En1_minus = bracket_root(f, Estar, b, fs, f(b));
      open = En1_minus - En_plus > options.gap_tol;
      if (!open)
        table.warnings.push_back("gap " + std::to_string(n) + " narrower than gap_tol (" + fmt(En1_minus - En_plus) +
                                 "), reported closed");
    }
    upper.push_back(En_plus);
    lower.push_back(En1_minus);
    table.gaps.push_back({n, En_plus, En1_minus, open});
  }
  for (int n = 1; n <= n_max; ++n) table.bands.emplace_back(lower[n - 1], upper[n - 1]);

  if (options.cross_check && n_max >= 1) {
    auto levels = [&](double k) {
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(fiber_matrix(V, 0.0, k, options.cutoff),
                                                               Eigen::EigenvaluesOnly);
      return Eigen::VectorXd(es.eigenvalues());
    };
    const Eigen::VectorXd k0 = levels(0.0), kh = levels(0.5);
    if (k0.size() < n_max + 1) throw Error(ErrorCode::config, "plane-wave cutoff too small for requested bands");
    double dev = 0.0;
    auto band_lo = [&](int n) { return std::min(k0(n - 1), kh(n - 1)); };
    auto band_hi = [&](int n) { return std::max(k0(n - 1), kh(n - 1)); };
    dev = std::abs(band_lo(1) - lower[0]);
    for (int n = 1; n <= n_max; ++n) {
      if (table.gaps[n].open) {
        dev = std::max(dev, std::abs(band_hi(n) - upper[n - 1]));
        dev = std::max(dev, std::abs(band_lo(n + 1) - lower[n]));
      } else {
        const double width = band_lo(n + 1) - band_hi(n);
        const double mid = 0.5 * (band_hi(n) + band_lo(n + 1));
        dev = std::max(dev, std::abs(mid - upper[n - 1]) / std::max(1.0, std::abs(mid)));
        if (width > options.gap_tol)
          table.warnings.push_back("gap " + std::to_string(n) + " has plane-wave width " + fmt(width) +
                                   " below the discriminant resolution");
      }
    }
    table.bloch_deviation = dev;
    if (dev > 1e-6)
      throw Error(ErrorCode::assertion, "band edges disagree with plane-wave eigenvalues by " + fmt(dev));
  }
  return table;
}

FloquetSplit floquet_split(const TransferMatrixR& T) {
  const double tr = T.trace();
  if (!(std::abs(tr) > 2.0 + 1e-12))
    throw Error(ErrorCode::energy_in_band, "E = " + fmt(T.E) + " lies in a band (|Delta| = " + fmt(std::abs(tr)) + ")");
  const double big = 0.5 * (tr + std::copysign(std::sqrt(tr * tr - 4.0), tr));
  const double small = T.det() / big;
  FloquetSplit f;
  f.E = T.E;
  f.discriminant = tr;
  f.lambda_decay = small;
  f.lambda_grow = big;
  auto normalize = [](Eigen::Vector2d v) {
    const double lead = std::abs(v(0)) > 1e-14 ? v(0) : v(1);
    return lead < 0.0 ? Eigen::Vector2d(-v) : v;
  };
  f.v_decay = normalize(eigvec2<Eigen::Matrix2d, Eigen::Vector2d>(T.m, small));
  f.v_grow = normalize(eigvec2<Eigen::Matrix2d, Eigen::Vector2d>(T.m, big));
  return f;
}

FloquetSplit floquet_split(const TrigPotential& V, double t, double E, const PropagationSettings& prop, double start) {
  return floquet_split(monodromy_hill(V, t, E, prop, start));
}

DiracFloquetSplit dirac_floquet_split(const TransferMatrixC& T) {
  const double tr = T.trace().real();
  if (!(std::abs(tr) > 2.0 + 1e-12))
    throw Error(ErrorCode::energy_in_band,
                "E = " + fmt(T.E) + " lies in a Dirac band (|Delta| = " + fmt(std::abs(tr)) + ")");
  const double big = 0.5 * (tr + std::copysign(std::sqrt(tr * tr - 4.0), tr));
  const double small = T.det().real() / big;
  DiracFloquetSplit f;
  f.E = T.E;
  f.discriminant = tr;
  f.lambda_decay = small;
  f.lambda_grow = big;
  auto normalize = [](Eigen::Vector2cd v) {
    const std::complex<double> lead = std::abs(v(0)) > 1e-14 ? v(0) : v(1);
    return Eigen::Vector2cd(v * (std::conj(lead) / std::abs(lead)));
  };
  f.v_decay = normalize(eigvec2<Eigen::Matrix2cd, Eigen::Vector2cd>(T.m, small));
  f.v_grow = normalize(eigvec2<Eigen::Matrix2cd, Eigen::Vector2cd>(T.m, big));
  return f;
}

GapTable dirac_gap_table(const TrigPotential& V, double lo, double hi, const SpectrumOptions& options) {
  if (!(hi > lo)) throw Error(ErrorCode::config, "Dirac window must satisfy lo < hi");
  auto delta = [&](double E) { return dirac_discriminant(V, E, options.prop); };
  const double dE = 0.005;
  const std::size_t count = static_cast<std::size_t>(std::ceil((hi - lo) / dE)) + 1;
  auto energy = [&](std::size_t i) { return std::min(hi, lo + static_cast<double>(i) * dE); };
  const std::vector<double> d = parallel_map(count, [&](std::size_t i) { return delta(energy(i)); });

  // Points where |Delta| crosses 2, in increasing order.
  std::vector<double> cuts;
  for (std::size_t i = 0; i + 1 < count; ++i) {
    for (double level : {2.0, -2.0}) {
      const double fa = d[i] - level, fb = d[i + 1] - level;
      if ((fa > 0.0) != (fb > 0.0))
        cuts.push_back(bracket_root([&](double E) { return delta(E) - level; }, energy(i), energy(i + 1), fa, fb));
    }
  }
  std::sort(cuts.begin(), cuts.end());

  GapTable table;
  table.gap_tol = options.gap_tol;
  int n = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (b - a <= options.gap_tol || std::abs(delta(0.5 * (a + b))) <= 2.0) continue;
    ++n;
    table.gaps.push_back({n, a, b, true});
  }
  for (std::size_t i = 0; i < table.gaps.size(); ++i) {
    const double below = i == 0 ? std::numeric_limits<double>::quiet_NaN() : table.gaps[i - 1].hi;
    table.bands.emplace_back(below, table.gaps[i].lo);
  }
  // g_0 slot is unused for Dirac; keep gaps indexable by their number.
  table.gaps.insert(table.gaps.begin(), Gap{0, std::numeric_limits<double>::quiet_NaN(),
                                            std::numeric_limits<double>::quiet_NaN(), false});

  for (std::size_t i = 1; i < table.gaps.size(); ++i) {
    const Gap& g = table.gaps[i];
    if (-g.hi < lo || -g.lo > hi) continue;
    bool mirrored = false;
    for (std::size_t j = 1; j < table.gaps.size(); ++j)
      mirrored |= std::abs(table.gaps[j].lo + g.hi) < 1e-8 && std::abs(table.gaps[j].hi + g.lo) < 1e-8;
    if (!mirrored)
      throw Error(ErrorCode::assertion,
                  "Dirac gap (" + fmt(g.lo) + ", " + fmt(g.hi) + ") has no mirror image under E -> -E");
  }
  return table;
}

double cell_dirichlet_eigenvalue(const TrigPotential& V, double t, const GapTable& table, int n,
                                 const PropagationSettings& prop) {
  const Gap& g = table.open_gap(n);
  auto s1 = [&](double E) { return monodromy_hill(V, t, E, prop).m(0, 1); };
  const double fa = s1(g.lo), fb = s1(g.hi);
  if ((fa > 0.0) == (fb > 0.0) && fa != 0.0 && fb != 0.0) return std::abs(fa) < std::abs(fb) ? g.lo : g.hi;
  return bracket_root(s1, g.lo, g.hi, fa, fb);
}

}  // namespace bulkedge
