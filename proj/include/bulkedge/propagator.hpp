#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "bulkedge/potential.hpp"

namespace bulkedge {

struct PropagationSettings {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.25;
  double rescale_threshold = 1e6;

  void validate() const;
};

// True solution is (u, du) * exp(log_scale).
struct HillState {
  double u = 0.0;
  double du = 0.0;
  double log_scale = 0.0;
};

struct DiracState {
  std::complex<double> up;
  std::complex<double> down;
  double log_scale = 0.0;
};

struct TransferMatrixR {
  Eigen::Matrix2d m;
  double E = 0.0;
  double det() const { return m.determinant(); }
  double trace() const { return m.trace(); }
};

struct TransferMatrixC {
  Eigen::Matrix2cd m;
  double E = 0.0;
  std::complex<double> det() const { return m.determinant(); }
  std::complex<double> trace() const { return m.trace(); }
};

// A scalar potential together with the points where it fails to be smooth.
struct HillPotential {
  std::function<double(double)> W;
  std::vector<double> kinks;
};

HillState propagate_hill(const HillState& state, const HillPotential& W, double E, double from, double to,
                         const PropagationSettings& settings = {});

// Fundamental matrix of the Hill system from `from` to `to`.
TransferMatrixR transfer_hill(const HillPotential& W, double E, double from, double to,
                              const PropagationSettings& settings = {});

// Unit-cell transfer matrix of V_t = V(. - t) over [start, start + 1].
// Columns are the solutions with data (1, 0) and (0, 1) at `start`.
TransferMatrixR monodromy_hill(const TrigPotential& V, double t, double E, const PropagationSettings& settings = {},
                               double start = 0.0);

double discriminant(const TrigPotential& V, double E, const PropagationSettings& settings = {});

DiracState propagate_dirac(const DiracState& state, const DiracMassProfile& mass, double E, double from, double to,
                           const PropagationSettings& settings = {});

// Unit-cell transfer matrix of the bulk Dirac operator D(t) over [start, start + 1].
TransferMatrixC monodromy_dirac(const TrigPotential& V, double t, double E, const PropagationSettings& settings = {},
                                double start = 0.0);

double dirac_discriminant(const TrigPotential& V, double E, const PropagationSettings& settings = {});

}  // namespace bulkedge
