#pragma once

#include <Eigen/Core>

#include "bulkedge/potential.hpp"

namespace bulkedge {

// H(t, k) in the basis e^{2 pi i (m + k) x}, m = -M..M (row index m + M).
Eigen::MatrixXcd fiber_matrix(const TrigPotential& V, double t, double k, int M);

struct BlochEigs {
  Eigen::VectorXd values;   // ascending, all 2M+1 of them
  Eigen::MatrixXcd frame;   // (2M+1) x n, orthonormal columns for the n lowest
  double t = 0.0, k = 0.0;
  int n = 0, M = 0;
};

// Lowest n eigenpairs of the fiber matrix. With check_cutoff set, the
// cutoff is validated by recomputing with 2M modes.
BlochEigs bloch_eigs(const TrigPotential& V, double t, double k, int n, int M, bool check_cutoff = false);

}  // namespace bulkedge
