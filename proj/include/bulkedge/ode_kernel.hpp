#pragma once

// Dormand-Prince 5(4) for linear systems Y' = A(x) Y with Y an Eigen
// fixed-size matrix (a 2-vector state or a 2x2 fundamental matrix).

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bulkedge/error.hpp"
#include "bulkedge/propagator.hpp"

namespace bulkedge::ode {

struct NoObserver {
  template <class Mat>
  void operator()(double, const Mat&, double) const {}
};

namespace dp5 {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;
}  // namespace dp5

template <class Mat>
double max_abs(const Mat& m) {
  return m.cwiseAbs().maxCoeff();
}

// Integrates over [a, b] (either direction) on which A is smooth. The
// coefficient is only ever evaluated strictly inside the segment, so a jump
// of A exactly at a or b is seen from the correct side.
template <class Mat, class CoefFn, class Obs>
void integrate_segment(Mat& y, double& log_scale, double a, double b, const CoefFn& A,
                       const PropagationSettings& s, Obs& obs, double& h) {
  using namespace dp5;
  if (a == b) return;
  const double dir = b > a ? 1.0 : -1.0;
  const double lo = std::min(a, b), hi = std::max(a, b);
  const double lo_in = std::nextafter(lo, hi), hi_in = std::nextafter(hi, lo);
  auto coef = [&](double x) { return A(std::clamp(x, lo_in, hi_in)); };

  double x = a;
  Mat k1 = coef(x) * y;
  if (!(h > 0.0)) {
    const double scale = 1.0 + max_abs(coef(x));
    h = std::min({s.max_step, hi - lo, 0.05 / scale});
  }
  long steps = 0;
  while (dir * (b - x) > 0.0) {
    if (++steps > 10'000'000) throw IntegrationError(x, "step budget exhausted at x = " + std::to_string(x));
    const double remaining = std::abs(b - x);
    const bool last = h >= remaining;
    const double hs = last ? remaining : h;
    const double hh = dir * hs;
    const double x_new = last ? b : x + hh;

    const Mat k2 = coef(x + c2 * hh) * (y + hh * (a21 * k1));
    const Mat k3 = coef(x + c3 * hh) * (y + hh * (a31 * k1 + a32 * k2));
    const Mat k4 = coef(x + c4 * hh) * (y + hh * (a41 * k1 + a42 * k2 + a43 * k3));
    const Mat k5 = coef(x + c5 * hh) * (y + hh * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Mat k6 = coef(x_new) * (y + hh * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Mat y5 = y + hh * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Mat k7 = coef(x_new) * y5;
    const Mat err = hh * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double en = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double sc = s.abs_tol + s.rel_tol * std::max(std::abs(y(i)), std::abs(y5(i)));
      en = std::max(en, std::abs(err(i)) / sc);
    }
    if (!std::isfinite(en)) throw IntegrationError(x, "non-finite state at x = " + std::to_string(x));

    if (en <= 1.0) {
      x = x_new;
      y = y5;
      k1 = k7;
      obs(x, y, log_scale);
      const double n = max_abs(y);
      if (n > s.rescale_threshold || n < 1.0 / s.rescale_threshold) {
        y /= n;
        k1 /= n;
        log_scale += std::log(n);
      }
      const double grow = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      h = std::min(s.max_step, last ? std::max(h, hs * grow) : hs * grow);
    } else {
      h = hs * std::max(0.2, 0.9 * std::pow(en, -0.25));
      if (h < 1e-13 * std::max(1.0, std::abs(x)))
        throw IntegrationError(x, "step size underflow at x = " + std::to_string(x));
    }
  }
}

// Integrates from `from` to `to`, splitting at every kink strictly inside.
template <class Mat, class CoefFn, class Obs = NoObserver>
void integrate(Mat& y, double& log_scale, double from, double to, const std::vector<double>& kinks,
               const CoefFn& A, const PropagationSettings& s, Obs&& obs = {}) {
  if (from == to) return;
  std::vector<double> pts{from};
  const double lo = std::min(from, to), hi = std::max(from, to);
  std::vector<double> inner;
  for (double k : kinks)
    if (k > lo && k < hi) inner.push_back(k);
  std::sort(inner.begin(), inner.end());
  inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
  if (to < from) std::reverse(inner.begin(), inner.end());
  pts.insert(pts.end(), inner.begin(), inner.end());
  pts.push_back(to);
  double h = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) integrate_segment(y, log_scale, pts[i], pts[i + 1], A, s, obs, h);
}

// Coefficient of the Hill system (u, u')' = [[0, 1], [W - E, 0]] (u, u').
template <class WFn>
auto hill_coefficient(const WFn& W, double E) {
  return [&W, E](double x) {
    Eigen::Matrix2d a;
    a << 0.0, 1.0, W(x) - E, 0.0;
    return a;
  };
}

// Coefficient of the Dirac system u' = i s3 (E - m1 s1 - m2 s2) u.
template <class MassFn>
auto dirac_coefficient(const MassFn& mass, double E) {
  return [&mass, E](double x) {
    const std::complex<double> m = mass(x);
    const std::complex<double> I(0.0, 1.0);
    Eigen::Matrix2cd a;
    a << I * E, -I * std::conj(m), I * m, -I * E;
    return a;
  };
}

}  // namespace bulkedge::ode
