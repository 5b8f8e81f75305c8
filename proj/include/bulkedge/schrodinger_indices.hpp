#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "bulkedge/flow.hpp"
#include "bulkedge/potential.hpp"
#include "bulkedge/propagator.hpp"
#include "bulkedge/spectrum.hpp"
#include "bulkedge/winding.hpp"

namespace bulkedge {

// plus: the space decaying at +infinity; minus: decaying at -infinity.
enum class Side { plus, minus };

// theta = (u' - i u) / (u' + i u)
std::complex<double> theta_of(double u, double du);

struct ThetaSample {
  std::complex<double> value;
  double x = 0.0, t = 0.0, E = 0.0;
  Side side = Side::plus;
};

ThetaSample theta_bulk(const TrigPotential& V, double t, double E, double x, Side side,
                       const PropagationSettings& prop = {});

// Sign changes on [0, 1) of the Floquet solution of V_t on the given side.
int zeros_in_cell(const TrigPotential& V, double t, double E, Side side, const PropagationSettings& prop = {});

struct EdgeState {
  double E = 0.0;
  double t = 0.0;
  std::vector<std::array<double, 3>> samples;  // (x, u, u'), trapezoid L2-normalised in u
  double decay_rate_left = 0.0;                // measured growth rate towards x = 0 from -X
  double decay_rate_right = 0.0;               // measured decay rate towards +X
  double expected_left = 0.0;                  // log |lambda_grow| of V
  double expected_right = 0.0;                 // -log |lambda_decay| of V_t
};

struct EdgeEigenvalue {
  double E = 0.0;
  bool near_edge = false;  // within 1e-6 of a band edge
  std::optional<EdgeState> state;
};

enum class DirichletKind { eigen, resonant };

struct DirichletFlowResult {
  FlowResult eigen;
  FlowResult resonant;
  double max_eigen_slope = 0.0;     // largest finite-difference slope along eigen branches
  double min_resonant_slope = 0.0;  // smallest finite-difference slope along resonant branches
  double join_error = 0.0;          // distance of the union of both kinds to the unit-cell Dirichlet curve
};

struct SchrodingerModel {
  TrigPotential V;
  SwitchFunction chi = SwitchFunction::ramp(-0.5, 0.5);
  PropagationSettings prop;
  int grid_t = 400;
  int grid_e = 48;
  int refine_limit = 24;
};

class SchrodingerSystem {
 public:
  // Computes the gap table for gaps 0..n_max over the search window [lo, hi].
  SchrodingerSystem(SchrodingerModel model, int n_max, double lo, double hi);

  const SchrodingerModel& model() const { return model_; }
  const GapTable& gaps() const { return gaps_; }

  // Maslov indices (M+, M-) at energy E in gap n.
  std::pair<int, int> maslov_indices(int n, std::optional<double> E = {}) const;
  int bulk_index(int n, std::optional<double> E = {}) const;

  // theta# at x from the edge solutions decaying at +inf (first) and -inf (second).
  std::pair<std::complex<double>, std::complex<double>> edge_thetas(double t, double E, double x = 0.0) const;
  std::complex<double> omega(double t, double E, double x = 0.0) const;
  PhasePath omega_path(int n, std::optional<double> E = {}) const;
  int edge_index(int n, std::optional<double> E = {}) const;

  std::vector<EdgeEigenvalue> edge_eigenvalues_at(double t, int n, bool with_states = true) const;
  EdgeState edge_state(double t, double E) const;

  // Branch continuation over the t-grid.
  FlowResult domain_wall_flow(int n) const;
  // As above, throwing AssertionFailure if the flow differs from the edge index.
  FlowResult spectral_flow_domain_wall(int n) const;

  std::vector<double> dirichlet_eigenvalues_at(double t, int n, DirichletKind kind = DirichletKind::eigen) const;
  DirichletFlowResult dirichlet_flow(int n) const;
  // As above, throwing AssertionFailure unless eigen branches decrease,
  // resonant branches increase and their union follows the cell Dirichlet
  // curve to 1e-4.
  DirichletFlowResult dirichlet_spectral_flow(int n) const;

 private:
  double scan_margin(const Gap& g) const;

  SchrodingerModel model_;
  GapTable gaps_;
  std::vector<double> kinks_;
};

}  // namespace bulkedge
