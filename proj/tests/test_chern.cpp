#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "bulkedge/bloch.hpp"
#include "bulkedge/chern.hpp"
#include "bulkedge/error.hpp"
#include "bulkedge/spectrum.hpp"
#include "test_helpers.hpp"

using namespace bulkedge;
using doctest::Approx;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

Eigen::MatrixXcd twist(double t, double k, int M) {
  Eigen::VectorXcd d(2 * M + 1);
  for (int m = -M; m <= M; ++m) d(m + M) = std::polar(1.0, -two_pi * (m + k) * t);
  return d.asDiagonal();
}

}  // namespace

TEST_SUITE("chern") {

TEST_CASE("free fiber eigenvalues") {
  const TrigPotential zero;
  const BlochEigs b = bloch_eigs(zero, 0.0, 0.0, 3, 8);
  CHECK(std::abs(b.values(0)) < 1e-12);
  CHECK(b.values(1) == Approx(two_pi * two_pi));
  CHECK(b.values(2) == Approx(two_pi * two_pi));
  const BlochEigs h = bloch_eigs(zero, 0.3, 0.25, 2, 8);
  CHECK(h.values(0) == Approx(std::pow(two_pi * 0.25, 2)));
  CHECK(h.values(1) == Approx(std::pow(two_pi * 0.75, 2)));
}

TEST_CASE("fiber matrix is Hermitian and the frame is an orthonormal eigenbasis") {
  const TrigPotential V = testing::reference_potential();
  for (double t : {0.0, 0.3})
    for (double k : {0.0, 0.17, 0.5}) {
      const Eigen::MatrixXcd H = fiber_matrix(V, t, k, 32);
      CHECK((H - H.adjoint()).norm() < 1e-12);
      const BlochEigs b = bloch_eigs(V, t, k, 3, 32, true);
      const Eigen::MatrixXcd& P = b.frame;
      CHECK((P.adjoint() * P - Eigen::MatrixXcd::Identity(3, 3)).norm() < 1e-10);
      const Eigen::MatrixXcd residual = H * P - P * b.values.head(3).cast<std::complex<double>>().asDiagonal();
      CHECK(residual.norm() < 1e-8);
    }
}

TEST_CASE("plane-wave band edges agree with the discriminant") {
  const TrigPotential V = testing::reference_potential();
  const GapTable g = band_edges(V, 3, -60.0, 240.0);
  const BlochEigs p = bloch_eigs(V, 0.0, 0.0, 4, 32), a = bloch_eigs(V, 0.0, 0.5, 4, 32);
  std::vector<double> edges;
  for (int i = 0; i < 4; ++i) {
    edges.push_back(p.values(i));
    edges.push_back(a.values(i));
  }
  std::sort(edges.begin(), edges.end());
  for (int n = 1; n <= 3; ++n) {
    CHECK(std::abs(edges[2 * n - 1] - g.gaps[n].lo) < 1e-6);
    CHECK(std::abs(edges[2 * n] - g.gaps[n].hi) < 1e-6);
  }
}

TEST_CASE("projectors are translation covariant and real") {
  const TrigPotential V = testing::reference_potential();
  for (int n = 1; n <= 3; ++n)
    for (double t : {0.2, 0.65})
      for (double k : {0.1, 0.4}) {
        const Eigen::MatrixXcd tau = twist(t, k, 32);
        const Eigen::MatrixXcd expected = tau * band_projector(V, 0.0, k, n) * tau.adjoint();
        CHECK((band_projector(V, t, k, n) - expected).norm() < 1e-9);
        CHECK(reality_deviation(V, t, k, n) < 1e-9);
      }
}

TEST_CASE("Chern numbers of the reference potential") {
  const TrigPotential V = testing::reference_potential();
  for (int n = 1; n <= 3; ++n) {
    const PlaquetteResult p = chern_plaquette(V, n);
    CHECK(p.chern == n);
    CHECK(std::abs(p.raw - n) < 1e-3);
    CHECK(p.min_link > 0.1);
    CHECK(p.curvature.size() == 1600);
    const PlaquetteResult fine = chern_plaquette(V, n, 80, 80);
    CHECK(fine.chern == p.chern);

    const FrameResult f = chern_frame(V, n);
    CHECK(f.chern == n);
    CHECK(f.max_unitarity_error < 1e-8);
    CHECK(f.min_transport_singular > 0.5);
    CHECK(chern_frame(V, n, 80).chern == n);
  }
}

TEST_CASE("covariant frame gives a scalar obstruction") {
  const TrigPotential V = testing::reference_potential();
  for (int n = 1; n <= 3; ++n) {
    const FrameResult f = chern_frame(V, n, 40, 32, FrameConstruction::covariant);
    CHECK(f.chern == n);
    CHECK(f.max_scalar_deviation < 1e-6);
  }
  for (double k : {0.0, 0.3, 0.8}) {
    const auto a = obstruction_unitary(V, k, 2, 32, FrameConstruction::transport);
    CHECK((a.adjoint() * a - Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-8);
  }
}

TEST_CASE("plaquette and frame methods agree on random potentials") {
  std::mt19937_64 rng(59);
  int tested = 0;
  for (int i = 0; i < 8; ++i) {
    const TrigPotential V = testing::random_potential(rng, 2, 6.0);
    const GapTable g = band_edges(V, 2, -40.0, 200.0, SpectrumOptions{});
    for (int n = 1; n <= 2; ++n) {
      if (!g.gaps[n].open || g.gaps[n].width() < 0.5) continue;
      ++tested;
      const int plaquette = chern_plaquette(V, n, 40, 40, 16).chern;
      CHECK(plaquette == chern_frame(V, n, 40, 16).chern);
      CHECK(plaquette == chern_plaquette(V, n, 80, 80, 16).chern);
      CHECK(plaquette == n);
    }
  }
  CHECK(tested > 4);

  TrigPotential weak;
  weak.cos_coeffs = {2.0};
  CHECK(chern_plaquette(weak, 1, 40, 40, 16).chern == chern_frame(weak, 1, 40, 16).chern);
}

TEST_CASE("coarse grids are rejected") {
  const TrigPotential V = testing::reference_potential();
  try {
    chern_plaquette(V, 3, 2, 2);
    FAIL("expected grid_too_coarse");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::grid_too_coarse);
  }
  CHECK_THROWS_AS(chern_plaquette(V, 1, 1, 10), Error);
}

}
