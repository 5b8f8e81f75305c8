#include "bulkedge/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bulkedge/error.hpp"

namespace bulkedge {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

double TrigPotential::operator()(double x) const {
  const double c1 = std::cos(two_pi * x), s1 = std::sin(two_pi * x);
  double c = 1.0, s = 0.0, v = constant;
  const std::size_t n = std::max(cos_coeffs.size(), sin_coeffs.size());
  for (std::size_t j = 0; j < n; ++j) {
    const double cn = c * c1 - s * s1;
    s = s * c1 + c * s1;
    c = cn;
    if (j < cos_coeffs.size()) v += cos_coeffs[j] * c;
    if (j < sin_coeffs.size()) v += sin_coeffs[j] * s;
  }
  return v;
}

double TrigPotential::derivative(double x) const {
  const double c1 = std::cos(two_pi * x), s1 = std::sin(two_pi * x);
  double c = 1.0, s = 0.0, dv = 0.0;
  const std::size_t n = std::max(cos_coeffs.size(), sin_coeffs.size());
  for (std::size_t j = 0; j < n; ++j) {
    const double cn = c * c1 - s * s1;
    s = s * c1 + c * s1;
    c = cn;
    const double w = two_pi * static_cast<double>(j + 1);
    if (j < cos_coeffs.size()) dv -= w * cos_coeffs[j] * s;
    if (j < sin_coeffs.size()) dv += w * sin_coeffs[j] * c;
  }
  return dv;
}

int TrigPotential::harmonics() const {
  int h = 0;
  for (std::size_t j = 0; j < cos_coeffs.size(); ++j)
    if (cos_coeffs[j] != 0.0) h = std::max(h, static_cast<int>(j + 1));
  for (std::size_t j = 0; j < sin_coeffs.size(); ++j)
    if (sin_coeffs[j] != 0.0) h = std::max(h, static_cast<int>(j + 1));
  return h;
}

std::complex<double> TrigPotential::fourier(int j) const {
  if (j == 0) return constant;
  const std::size_t a = static_cast<std::size_t>(std::abs(j)) - 1;
  const double cj = a < cos_coeffs.size() ? cos_coeffs[a] : 0.0;
  const double sj = a < sin_coeffs.size() ? sin_coeffs[a] : 0.0;
  const std::complex<double> half(cj / 2.0, -sj / 2.0);
  return j > 0 ? half : std::conj(half);
}

double TrigPotential::min_value() const {
  double m = (*this)(0.0);
  for (int i = 1; i < 4096; ++i) m = std::min(m, (*this)(i / 4096.0));
  return m;
}

double TrigPotential::max_value() const {
  double m = (*this)(0.0);
  for (int i = 1; i < 4096; ++i) m = std::max(m, (*this)(i / 4096.0));
  return m;
}

SwitchFunction::SwitchFunction(std::vector<std::pair<double, double>> breakpoints)
    : points_(std::move(breakpoints)) {
  if (points_.size() < 2) throw Error(ErrorCode::config, "switch function needs at least two breakpoints");
  if (points_.front().second != 1.0 || points_.back().second != 0.0)
    throw Error(ErrorCode::config, "switch function must start at value 1 and end at value 0");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double v = points_[i].second;
    if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorCode::config, "switch function values must lie in [0, 1]");
    if (!std::isfinite(points_[i].first)) throw Error(ErrorCode::config, "switch function breakpoint is not finite");
    if (i == 0) continue;
    const double dx = points_[i].first - points_[i - 1].first;
    if (dx < 0.0) throw Error(ErrorCode::config, "switch function breakpoints must be increasing in x");
    if (dx == 0.0 && i >= 2 && points_[i - 2].first == points_[i].first)
      throw Error(ErrorCode::config, "at most two breakpoints may share an x");
  }
}

SwitchFunction SwitchFunction::ramp(double a, double b) { return SwitchFunction({{a, 1.0}, {b, 0.0}}); }

SwitchFunction SwitchFunction::step(double x0) { return SwitchFunction({{x0, 1.0}, {x0, 0.0}}); }

double SwitchFunction::operator()(double x) const {
  if (x < points_.front().first) return 1.0;
  if (x >= points_.back().first) return 0.0;
  // First breakpoint strictly to the right of x; coincident pairs resolve to the right value.
  auto it = std::upper_bound(points_.begin(), points_.end(), x,
                             [](double v, const std::pair<double, double>& p) { return v < p.first; });
  const auto& [x1, v1] = *it;
  const auto& [x0, v0] = *(it - 1);
  return v0 + (v1 - v0) * (x - x0) / (x1 - x0);
}

double eval_bulk(const TrigPotential& V, double t, double x) { return V(x - t); }

double eval_edge(const TrigPotential& V, const SwitchFunction& chi, double t, double x) {
  const double c = chi(x);
  if (c == 1.0) return V(x);
  if (c == 0.0) return V(x - t);
  return V(x) * c + V(x - t) * (1.0 - c);
}

std::vector<double> breakpoints(const SwitchFunction& chi, double lo, double hi) {
  std::vector<double> out;
  for (const auto& p : chi.points())
    if (p.first >= lo && p.first <= hi && (out.empty() || out.back() != p.first)) out.push_back(p.first);
  return out;
}

std::complex<double> DiracMassProfile::operator()(double x) const {
  const double v = (*V)(x);
  const double c = chi ? (*chi)(x) : 0.0;
  if (c == 1.0) return v;
  const double a = two_pi * t;
  return {v * (c + (1.0 - c) * std::cos(a)), v * (1.0 - c) * std::sin(a)};
}

}  // namespace bulkedge
