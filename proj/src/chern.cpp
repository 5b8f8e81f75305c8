#include "bulkedge/chern.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "bulkedge/error.hpp"
#include "bulkedge/parallel.hpp"

namespace bulkedge {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Eigenvector coefficients at k + 1 in the basis at k + 1 are those at k
// shifted by one plane wave.
Eigen::MatrixXcd shift_frame(const Eigen::MatrixXcd& psi) {
  const Eigen::Index N = psi.rows();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(N, psi.cols());
  out.topRows(N - 1) = psi.bottomRows(N - 1);
  return out;
}

std::complex<double> link(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, double& min_abs) {
  const std::complex<double> d = (a.adjoint() * b).determinant();
  const double r = std::abs(d);
  min_abs = std::min(min_abs, r);
  return d / r;
}

Eigen::MatrixXcd polar_factor(const Eigen::MatrixXcd& A, double& min_singular) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  min_singular = std::min(min_singular, svd.singularValues().minCoeff());
  return svd.matrixU() * svd.matrixV().adjoint();
}

Eigen::MatrixXcd translate(const Eigen::MatrixXcd& psi, double t, double k, int M) {
  Eigen::MatrixXcd out = psi;
  for (Eigen::Index r = 0; r < psi.rows(); ++r) out.row(r) *= std::polar(1.0, -two_pi * (static_cast<double>(r - M) + k) * t);
  return out;
}

}  // namespace

PlaquetteResult chern_plaquette(const TrigPotential& V, int n, int Nt, int Nk, int M) {
  if (Nt < 2 || Nk < 2) throw Error(ErrorCode::config, "plaquette grid needs at least 2 x 2 points");
  const auto frames = parallel_map(static_cast<std::size_t>(Nt) * Nk, [&](std::size_t idx) {
    const int i = static_cast<int>(idx / Nk), j = static_cast<int>(idx % Nk);
    return bloch_eigs(V, static_cast<double>(i) / Nt, static_cast<double>(j) / Nk, n, M).frame;
  });
  auto at = [&](int i, int j) -> Eigen::MatrixXcd {
    const Eigen::MatrixXcd& f = frames[static_cast<std::size_t>(i % Nt) * Nk + (j % Nk)];
    return j == Nk ? shift_frame(f) : f;
  };

  PlaquetteResult out;
  out.Nt = Nt;
  out.Nk = Nk;
  // Link variables in t-direction U_t(i, j) and k-direction U_k(i, j).
  std::vector<std::complex<double>> Ut(static_cast<std::size_t>(Nt) * (Nk + 1)), Uk(static_cast<std::size_t>(Nt) * Nk);
  for (int i = 0; i < Nt; ++i) {
    for (int j = 0; j <= Nk; ++j) Ut[i * (Nk + 1) + j] = link(at(i, j), at(i + 1, j), out.min_link);
    for (int j = 0; j < Nk; ++j) Uk[i * Nk + j] = link(at(i, j), at(i, j + 1), out.min_link);
  }
  if (out.min_link < 0.1)
    throw Error(ErrorCode::grid_too_coarse,
                "plaquette overlap determinant " + std::to_string(out.min_link) + " below 0.1; refine the grid");

  double total = 0.0;
  out.curvature.reserve(static_cast<std::size_t>(Nt) * Nk);
  for (int i = 0; i < Nt; ++i)
    for (int j = 0; j < Nk; ++j) {
      const auto uk_next = Uk[((i + 1) % Nt) * Nk + j];
      const std::complex<double> loop =
          Ut[i * (Nk + 1) + j] * uk_next * std::conj(Ut[i * (Nk + 1) + j + 1]) * std::conj(Uk[i * Nk + j]);
      const double F = std::arg(loop);
      total += F;
      out.curvature.push_back({static_cast<double>(i) / Nt, static_cast<double>(j) / Nk, F});
    }
  out.raw = -total / two_pi;
  const double r = std::round(out.raw);
  if (std::abs(out.raw - r) >= 1e-3)
    throw Error(ErrorCode::assertion, "plaquette sum " + std::to_string(out.raw) + " is not an integer");
  out.chern = static_cast<int>(r);
  return out;
}

Eigen::MatrixXcd obstruction_unitary(const TrigPotential& V, double k, int n, int M, FrameConstruction how, int Nt,
                                     double* min_singular) {
  const Eigen::MatrixXcd psi0 = bloch_eigs(V, 0.0, k, n, M).frame;
  Eigen::MatrixXcd psi1;
  double smin = 1.0;
  if (how == FrameConstruction::covariant) {
    psi1 = translate(psi0, 1.0, k, M);
  } else {
    Eigen::MatrixXcd psi = psi0;
    for (int s = 1; s <= Nt; ++s) {
      const Eigen::MatrixXcd next = bloch_eigs(V, static_cast<double>(s) / Nt, k, n, M).frame;
      psi = next * polar_factor(next.adjoint() * psi, smin);
    }
    psi1 = psi;
  }
  if (min_singular) *min_singular = smin;
  return psi1.adjoint() * psi0;
}

FrameResult chern_frame(const TrigPotential& V, int n, int Nk, int M, FrameConstruction how, int Nt) {
  if (Nk < 2) throw Error(ErrorCode::config, "frame method needs at least 2 k samples");
  struct Sample {
    Eigen::MatrixXcd U;
    double smin;
  };
  auto sample = [&](double k) {
    Sample s;
    s.U = obstruction_unitary(V, k, n, M, how, Nt, &s.smin);
    return s;
  };
  const auto grid = parallel_map(static_cast<std::size_t>(Nk) + 1, [&](std::size_t j) { return sample(static_cast<double>(j) / Nk); });

  FrameResult out;
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double k = static_cast<double>(j) / Nk;
    out.min_transport_singular = std::min(out.min_transport_singular, grid[j].smin);
    out.max_unitarity_error = std::max(out.max_unitarity_error, (grid[j].U.adjoint() * grid[j].U - I).norm());
    out.max_scalar_deviation =
        std::max(out.max_scalar_deviation, (grid[j].U - std::polar(1.0, two_pi * k) * I).norm());
  }
  if (out.min_transport_singular < 0.5)
    throw Error(ErrorCode::frame_discontinuity, "transport overlap singular value " +
                                                    std::to_string(out.min_transport_singular) + " below 0.5");
  if (out.max_unitarity_error > 1e-8)
    throw Error(ErrorCode::assertion,
                "obstruction matrix not unitary (deviation " + std::to_string(out.max_unitarity_error) + ")");

  PathOptions o;
  o.initial_samples = Nk + 1;
  o.refine_limit = 16;
  const CircleMap det = [&](double k) {
    const double x = k * Nk;
    const double j = std::round(x);
    if (std::abs(x - j) < 1e-12) return grid[static_cast<std::size_t>(j)].U.determinant();
    return sample(k).U.determinant();
  };
  out.det_path = build_path(det, o);
  out.chern = winding_number(out.det_path);
  return out;
}

Eigen::MatrixXcd band_projector(const TrigPotential& V, double t, double k, int n, int M) {
  const Eigen::MatrixXcd psi = bloch_eigs(V, t, k, n, M).frame;
  return psi * psi.adjoint();
}

double reality_deviation(const TrigPotential& V, double t, double k, int n, int M) {
  const Eigen::MatrixXcd P = band_projector(V, t, k, n, M);
  const Eigen::MatrixXcd Q = band_projector(V, t, -k, n, M);
  const Eigen::Index N = P.rows();
  double dev = 0.0;
  for (Eigen::Index a = 0; a < N; ++a)
    for (Eigen::Index b = 0; b < N; ++b) dev = std::max(dev, std::abs(Q(a, b) - std::conj(P(N - 1 - a, N - 1 - b))));
  return dev;
}

}  // namespace bulkedge
