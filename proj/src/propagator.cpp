#include "bulkedge/propagator.hpp"

#include <cmath>
#include <limits>

#include "bulkedge/error.hpp"
#include "bulkedge/ode_kernel.hpp"

namespace bulkedge {

void PropagationSettings::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || !(max_step > 0.0) || !(rescale_threshold > 1.0))
    throw Error(ErrorCode::config, "propagation settings must be positive (rescale_threshold > 1)");
}

HillState propagate_hill(const HillState& state, const HillPotential& W, double E, double from, double to,
                         const PropagationSettings& settings) {
  Eigen::Vector2d y(state.u, state.du);
  double log_scale = state.log_scale;
  ode::integrate(y, log_scale, from, to, W.kinks, ode::hill_coefficient(W.W, E), settings);
  return {y(0), y(1), log_scale};
}

TransferMatrixR transfer_hill(const HillPotential& W, double E, double from, double to,
                              const PropagationSettings& settings) {
  Eigen::Matrix2d y = Eigen::Matrix2d::Identity();
  double log_scale = 0.0;
  ode::integrate(y, log_scale, from, to, W.kinks, ode::hill_coefficient(W.W, E), settings);
  return {y * std::exp(log_scale), E};
}

TransferMatrixR monodromy_hill(const TrigPotential& V, double t, double E, const PropagationSettings& settings,
                               double start) {
  auto W = [&V, t](double x) { return V(x - t); };
  Eigen::Matrix2d y = Eigen::Matrix2d::Identity();
  double log_scale = 0.0;
  ode::integrate(y, log_scale, start, start + 1.0, {}, ode::hill_coefficient(W, E), settings);
  return {y * std::exp(log_scale), E};
}

double discriminant(const TrigPotential& V, double E, const PropagationSettings& settings) {
  return monodromy_hill(V, 0.0, E, settings).trace();
}

DiracState propagate_dirac(const DiracState& state, const DiracMassProfile& mass, double E, double from, double to,
                           const PropagationSettings& settings) {
  Eigen::Vector2cd y(state.up, state.down);
  double log_scale = state.log_scale;
  const std::vector<double> kinks = mass.chi ? breakpoints(*mass.chi, std::min(from, to), std::max(from, to))
                                             : std::vector<double>{};
  ode::integrate(y, log_scale, from, to, kinks, ode::dirac_coefficient(mass, E), settings);
  return {y(0), y(1), log_scale};
}

TransferMatrixC monodromy_dirac(const TrigPotential& V, double t, double E, const PropagationSettings& settings,
                                double start) {
  const DiracMassProfile mass{&V, nullptr, t};
  Eigen::Matrix2cd y = Eigen::Matrix2cd::Identity();
  double log_scale = 0.0;
  ode::integrate(y, log_scale, start, start + 1.0, {}, ode::dirac_coefficient(mass, E), settings);
  return {y * std::exp(log_scale), E};
}

double dirac_discriminant(const TrigPotential& V, double E, const PropagationSettings& settings) {
  return monodromy_dirac(V, 0.0, E, settings).trace().real();
}

}  // namespace bulkedge
