#include "bulkedge/bloch.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "bulkedge/error.hpp"

namespace bulkedge {

Eigen::MatrixXcd fiber_matrix(const TrigPotential& V, double t, double k, int M) {
  const int N = 2 * M + 1;
  const int J = V.harmonics();
  const double two_pi = 2.0 * std::numbers::pi;
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(N, N);
  for (int r = 0; r < N; ++r) {
    const double q = two_pi * (r - M + k);
    H(r, r) = q * q + V.constant;
    for (int j = 1; j <= J; ++j) {
      if (r - j < 0) break;
      // <m| V_t |m - j> = Vhat_j e^{-2 pi i j t}
      const std::complex<double> v = V.fourier(j) * std::polar(1.0, -two_pi * j * t);
      H(r, r - j) = v;
      H(r - j, r) = std::conj(v);
    }
  }
  return H;
}

BlochEigs bloch_eigs(const TrigPotential& V, double t, double k, int n, int M, bool check_cutoff) {
  if (n < 1 || 2 * M + 1 < n + 1) throw Error(ErrorCode::config, "plane-wave cutoff too small for requested bands");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(fiber_matrix(V, t, k, M));
  if (es.info() != Eigen::Success) throw Error(ErrorCode::assertion, "Hermitian eigensolver failed");
  BlochEigs out;
  out.values = es.eigenvalues();
  out.frame = es.eigenvectors().leftCols(n);
  out.t = t;
  out.k = k;
  out.n = n;
  out.M = M;
  if (out.values(n) - out.values(n - 1) < 1e-8)
    throw Error(ErrorCode::gap_closed, "bands " + std::to_string(n) + " and " + std::to_string(n + 1) +
                                           " touch at t = " + std::to_string(t) + ", k = " + std::to_string(k));
  if (check_cutoff) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> fine(fiber_matrix(V, t, k, 2 * M), Eigen::EigenvaluesOnly);
    const double drift = std::abs(fine.eigenvalues()(n - 1) - out.values(n - 1));
    if (drift > 1e-8 * std::max(1.0, std::abs(out.values(n - 1))))
      throw Error(ErrorCode::grid_too_coarse, "plane-wave cutoff M = " + std::to_string(M) +
                                                  " not converged (eigenvalue drift " + std::to_string(drift) + ")");
  }
  return out;
}

}  // namespace bulkedge
