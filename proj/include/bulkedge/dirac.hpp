#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "bulkedge/flow.hpp"
#include "bulkedge/potential.hpp"
#include "bulkedge/propagator.hpp"
#include "bulkedge/schrodinger_indices.hpp"
#include "bulkedge/spectrum.hpp"

namespace bulkedge {

// theta = u_down / u_up
struct DiracTheta {
  std::complex<double> value;
  double x = 0.0, t = 0.0, E = 0.0;
  Side side = Side::plus;
};

// chi == nullptr selects the bulk operator D(t). Raises modulus_deviation
// when ||u_down| - |u_up|| exceeds 1e-5 relative to the spinor size.
DiracTheta dirac_theta(const TrigPotential& V, const SwitchFunction* chi, double t, double E, double x, Side side,
                       const PropagationSettings& prop = {});

// Largest relative ||u_down| - |u_up|| met while propagating the decaying
// solution of D(t) (side plus) from the right over `cells` unit cells.
double decaying_modulus_deviation(const TrigPotential& V, const SwitchFunction* chi, double t, double E, int cells,
                                  const PropagationSettings& prop = {});

struct ZeroMode {
  double E = 0.0;
  double t = 0.5;
  struct Sample {
    double x;
    std::complex<double> up, down;
  };
  std::vector<Sample> samples;  // L2-normalised spinor
  double decay_rate_left = 0.0;
  double decay_rate_right = 0.0;
  double expected_left = 0.0;
  double expected_right = 0.0;
};

struct DiracModel {
  TrigPotential V;
  SwitchFunction chi = SwitchFunction::ramp(-0.5, 0.5);
  PropagationSettings prop;
  int grid_t = 400;
  int grid_e = 48;
  int refine_limit = 24;
};

class DiracSystem {
 public:
  DiracSystem(DiracModel model, double lo, double hi);

  const DiracModel& model() const { return model_; }
  const GapTable& gaps() const { return gaps_; }
  int gap_count() const { return gaps_.n_max(); }

  std::pair<int, int> maslov_indices(int n, std::optional<double> E = {}) const;
  int bulk_index(int n, std::optional<double> E = {}) const;

  std::complex<double> omega(double t, double E, double x = 0.0) const;
  PhasePath omega_path(int n, std::optional<double> E = {}) const;
  int edge_index(int n, std::optional<double> E = {}) const;

  std::vector<double> edge_eigenvalues_at(double t, int n) const;
  FlowResult flow(int n) const;
  // Throws AssertionFailure if the flow differs from the edge index.
  FlowResult spectral_flow(int n) const;

  // Number of the gap containing E = 0; zero_in_spectrum if none does.
  int zero_gap() const;
  ZeroMode zero_mode() const;
  ZeroMode spinor_profile(double t, double E) const;

  // Max over the grid t_j = j / N of the Hausdorff distance between the
  // eigenvalues in gap n at t and the negated eigenvalues in the mirror gap
  // at 1 - t. Points within 1e-6 of a band edge are ignored.
  double symmetry_check(int n, int N) const;
  // Gap whose interval is the negative of gap n.
  int mirror_gap(int n) const;

 private:
  std::pair<Eigen::Vector2cd, Eigen::Vector2cd> edge_spinors(double t, double E, double x, double* log_right = nullptr,
                                                             double* log_left = nullptr) const;
  double scan_margin(const Gap& g) const;

  DiracModel model_;
  GapTable gaps_;
  std::vector<double> kinks_;
};

}  // namespace bulkedge
