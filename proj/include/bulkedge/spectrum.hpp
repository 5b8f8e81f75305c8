#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bulkedge/potential.hpp"
#include "bulkedge/propagator.hpp"

namespace bulkedge {

struct Gap {
  int n = 0;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = 0.0;
  bool open = false;

  double width() const { return hi - lo; }
  // Representative energy: the midpoint, or one unit below the spectrum for g_0.
  double mid() const { return std::isfinite(lo) ? 0.5 * (lo + hi) : hi - 1.0; }
  bool contains(double E) const { return E > lo && E < hi; }
};

struct GapTable {
  // bands[n-1] = (E_n^-, E_n^+)
  std::vector<std::pair<double, double>> bands;
  // gaps[0] = g_0 = (-inf, E_1^-); gaps[n] = (E_n^+, E_{n+1}^-)
  std::vector<Gap> gaps;
  double gap_tol = 1e-8;
  // Largest disagreement between discriminant edges and plane-wave eigenvalues.
  // Closed gaps contribute the relative offset of their midpoint.
  double bloch_deviation = 0.0;
  std::vector<std::string> warnings;

  int n_max() const { return static_cast<int>(gaps.size()) - 1; }
  // Gap n, throwing gap_closed if it is not open.
  const Gap& open_gap(int n) const;
};

struct SpectrumOptions {
  PropagationSettings prop;
  double gap_tol = 1e-8;
  // |Delta| must exceed 2 by this much at its extremum for a gap to count as open.
  double excess_tol = 1e-9;
  bool cross_check = true;
  int cutoff = 32;
};

GapTable band_edges(const TrigPotential& V, int n_max, double lo, double hi, const SpectrumOptions& options = {});

struct FloquetSplit {
  double lambda_decay = 0.0;
  double lambda_grow = 0.0;
  Eigen::Vector2d v_decay;
  Eigen::Vector2d v_grow;
  double E = 0.0;
  double discriminant = 0.0;
};

// Decaying (|lambda| < 1) and growing eigendirections of the unit-cell
// transfer matrix of V_t started at `start`.
FloquetSplit floquet_split(const TrigPotential& V, double t, double E, const PropagationSettings& prop = {},
                           double start = 0.0);
FloquetSplit floquet_split(const TransferMatrixR& T);

struct DiracFloquetSplit {
  double lambda_decay = 0.0;
  double lambda_grow = 0.0;
  Eigen::Vector2cd v_decay;  // first component real and positive
  Eigen::Vector2cd v_grow;
  double E = 0.0;
  double discriminant = 0.0;
};

DiracFloquetSplit dirac_floquet_split(const TransferMatrixC& T);

// Gaps of the Dirac operator D_0 fully contained in [lo, hi], numbered
// 1, 2, ... from below. bands[i] holds the band just below gap i+1 when
// its lower end is inside the window (NaN otherwise).
GapTable dirac_gap_table(const TrigPotential& V, double lo, double hi, const SpectrumOptions& options = {});

// Dirichlet eigenvalue of V_t on the unit cell [0, 1] lying in closed gap n.
double cell_dirichlet_eigenvalue(const TrigPotential& V, double t, const GapTable& table, int n,
                                 const PropagationSettings& prop = {});

}  // namespace bulkedge
