#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "bulkedge/winding.hpp"

namespace bulkedge {

// Spectral flow of a 1-periodic family through one gap (lo, hi).
struct FlowProblem {
  double lo = 0.0;
  double hi = 0.0;
  // Sorted eigenvalues inside the gap at parameter t.
  std::function<std::vector<double>(double)> eigenvalues;
  // Unit complex function of (t, E) equal to 1 exactly at eigenvalues.
  std::function<std::complex<double>(double, double)> phase;
  int grid_t = 400;
  int max_refine = 10;
  // Entries and exits of branches are only accepted this close (relative
  // to the gap width) to a band edge.
  double edge_zone = 0.2;
  // Samples closer than this to a band edge are reported separately.
  double near_edge = 1e-6;
};

struct FlowSample {
  double t = 0.0;
  double E = 0.0;
  int branch = 0;
};

struct FlowCrossing {
  double t = 0.0;
  double E = 0.0;
  double slope = 0.0;  // dE/dt of the crossing branch
  int nu = 0;          // orientation of the phase crossing through 1
};

struct FlowResult {
  int flow = 0;  // -sum sgn(E_k') over crossings of E_star
  double E_star = 0.0;
  int perturbations = 0;
  int branch_count = 0;
  int refinements = 0;
  std::vector<FlowSample> samples;  // by t, then E
  std::vector<FlowCrossing> crossings;
  std::vector<FlowSample> near_edge;
};

FlowResult compute_flow(const FlowProblem& problem);

// Roots of f(E) = 1 on (lo + margin, hi - margin). Sampling is clustered
// towards both ends of the interval. `orientation` is the known direction
// of rotation of f in E (see PathOptions).
std::vector<double> phase_roots(const std::function<std::complex<double>(double)>& f, double lo, double hi,
                                int initial_samples, double margin, int refine_limit = 24, int orientation = 0);

}  // namespace bulkedge
