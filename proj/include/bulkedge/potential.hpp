#pragma once

#include <complex>
#include <utility>
#include <vector>

namespace bulkedge {

// V(x) = constant + sum_j cos_coeffs[j-1] cos(2 pi j x) + sin_coeffs[j-1] sin(2 pi j x)
struct TrigPotential {
  double constant = 0.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;

  double operator()(double x) const;
  double derivative(double x) const;
  // Highest harmonic carrying a coefficient.
  int harmonics() const;
  // Fourier coefficient of e^{2 pi i j x}.
  std::complex<double> fourier(int j) const;
  double min_value() const;
  double max_value() const;
};

// Piecewise-linear cutoff, equal to 1 left of the first breakpoint and 0 right
// of the last. Two breakpoints may share an x to encode a jump.
class SwitchFunction {
 public:
  SwitchFunction() = default;
  explicit SwitchFunction(std::vector<std::pair<double, double>> breakpoints);

  // The usual ramp from 1 at a to 0 at b.
  static SwitchFunction ramp(double a, double b);
  // chi = 1 for x < x0 and 0 for x >= x0.
  static SwitchFunction step(double x0);

  double operator()(double x) const;
  double left_end() const { return points_.front().first; }
  double right_end() const { return points_.back().first; }
  const std::vector<std::pair<double, double>>& points() const { return points_; }

 private:
  std::vector<std::pair<double, double>> points_;
};

double eval_bulk(const TrigPotential& V, double t, double x);
double eval_edge(const TrigPotential& V, const SwitchFunction& chi, double t, double x);

// Kinks of V^chi_t inside [lo, hi], sorted and deduplicated.
std::vector<double> breakpoints(const SwitchFunction& chi, double lo, double hi);

// Complex Dirac mass m = m1 + i m2 multiplying the off-diagonal of the
// Dirac operator: m1 s1 + m2 s2 = [[0, conj(m)], [m, 0]].
struct DiracMassProfile {
  const TrigPotential* V = nullptr;
  const SwitchFunction* chi = nullptr;  // null: bulk operator D(t) everywhere
  double t = 0.0;

  std::complex<double> operator()(double x) const;
  double m1(double x) const { return (*this)(x).real(); }
  double m2(double x) const { return (*this)(x).imag(); }
};

}  // namespace bulkedge
