#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "bulkedge/bloch.hpp"
#include "bulkedge/error.hpp"
#include "bulkedge/spectrum.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace bulkedge;
using doctest::Approx;

namespace {

void check_table_invariants(const TrigPotential& V, const GapTable& g) {
  for (std::size_t i = 0; i < g.bands.size(); ++i) {
    CHECK(g.bands[i].first < g.bands[i].second);
    if (i + 1 < g.bands.size()) CHECK(g.bands[i].second <= g.bands[i + 1].first);
    CHECK(std::abs(std::abs(discriminant(V, g.bands[i].first)) - 2.0) < 1e-8);
    CHECK(std::abs(std::abs(discriminant(V, g.bands[i].second)) - 2.0) < 1e-8);
    for (double s : {0.1, 0.5, 0.9}) {
      const double E = g.bands[i].first + s * (g.bands[i].second - g.bands[i].first);
      CHECK(std::abs(discriminant(V, E)) <= 2.0);
    }
  }
  for (int n = 1; n <= g.n_max(); ++n) {
    const Gap& gap = g.gaps[n];
    CHECK(gap.open == (gap.hi - gap.lo > g.gap_tol));
    if (gap.open) CHECK(std::abs(discriminant(V, gap.mid())) > 2.0);
  }
}

}  // namespace

TEST_SUITE("spectrum") {

TEST_CASE("free operator has no open gaps") {
  const TrigPotential zero;
  const GapTable g = band_edges(zero, 4, -10.0, 400.0);
  CHECK(g.bands.front().first == Approx(0.0).scale(1.0).epsilon(1e-8));
  CHECK(g.gaps[0].open);
  for (int n = 1; n <= 4; ++n) {
    CHECK_FALSE(g.gaps[n].open);
    CHECK(g.bands[n - 1].second == Approx(std::pow(n * std::numbers::pi, 2)).epsilon(1e-8));
    if (n < 4) CHECK(g.bands[n - 1].second == Approx(g.bands[n].first).epsilon(1e-8));
  }
  CHECK_THROWS_AS(g.open_gap(2), Error);
}

TEST_CASE("reference potential opens the first three gaps") {
  const TrigPotential V = testing::reference_potential();
  const GapTable g = band_edges(V, 3, -60.0, 240.0);
  REQUIRE(g.n_max() == 3);
  for (int n = 0; n <= 3; ++n) CHECK(g.gaps[n].open);
  CHECK(g.bloch_deviation < 1e-6);
  check_table_invariants(V, g);
  // Edges from plane-wave eigenvalues at k = 0 and k = 1/2.
  const BlochEigs p = bloch_eigs(V, 0.0, 0.0, 8, 64), a = bloch_eigs(V, 0.0, 0.5, 8, 64);
  std::vector<double> edges;
  for (int i = 0; i < 8; ++i) {
    edges.push_back(p.values(i));
    edges.push_back(a.values(i));
  }
  std::sort(edges.begin(), edges.end());
  for (int n = 1; n <= 3; ++n) {
    CHECK(g.gaps[n].lo == Approx(edges[2 * n - 1]).epsilon(1e-8));
    CHECK(g.gaps[n].hi == Approx(edges[2 * n]).epsilon(1e-8));
  }
}

TEST_CASE("Mathieu band edges match a periodic finite-difference solve") {
  TrigPotential V;
  V.cos_coeffs = {50.0};
  const GapTable g = band_edges(V, 4, -80.0, 260.0);
  check_table_invariants(V, g);
  const std::vector<double> fd = oracle::fd_periodic([&](double x) { return V(x); }, 2.0, 1 << 14, -80.0, 300.0);
  for (const auto& [lo, hi] : g.bands)
    for (double edge : {lo, hi}) {
      const auto it = std::min_element(fd.begin(), fd.end(), [&](double x, double y) {
        return std::abs(x - edge) < std::abs(y - edge);
      });
      REQUIRE(it != fd.end());
      CHECK(std::abs(*it - edge) < 1e-6);
    }
}

TEST_CASE("random potentials satisfy the table invariants") {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 4; ++i) {
    const TrigPotential V = testing::random_potential(rng, 2, 15.0);
    const GapTable g = band_edges(V, 3, -40.0, 200.0);
    check_table_invariants(V, g);
  }
}

TEST_CASE("Floquet split of the free operator below the spectrum") {
  const TrigPotential zero;
  const FloquetSplit f = floquet_split(zero, 0.0, -1.0);
  CHECK(f.lambda_decay == Approx(std::exp(-1.0)).epsilon(1e-10));
  CHECK(f.lambda_grow == Approx(std::exp(1.0)).epsilon(1e-10));
  CHECK(f.v_decay(0) == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
  CHECK(f.v_decay(1) == Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-10));
  CHECK(f.v_grow(0) == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
  CHECK(f.v_grow(1) == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
  CHECK_THROWS_AS(floquet_split(zero, 0.0, 1.0), Error);
}

TEST_CASE("Floquet eigenpairs in the gaps of the reference potential") {
  const TrigPotential V = testing::reference_potential();
  const GapTable g = band_edges(V, 3, -60.0, 240.0);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> s(0.02, 0.98), t(0.0, 1.0);
  for (int n = 0; n <= 3; ++n)
    for (int i = 0; i < 5; ++i) {
      const Gap& gap = g.gaps[n];
      const double E = n == 0 ? gap.hi - 1.0 - 10.0 * s(rng) : gap.lo + s(rng) * gap.width();
      const TransferMatrixR T = monodromy_hill(V, t(rng), E);
      const FloquetSplit f = floquet_split(T);
      CHECK(std::abs(f.lambda_decay) < 1.0);
      CHECK(f.lambda_decay * f.lambda_grow == Approx(1.0).epsilon(1e-8));
      CHECK((T.m * f.v_decay - f.lambda_decay * f.v_decay).norm() < 1e-8 * T.m.norm());
      CHECK((T.m * f.v_grow - f.lambda_grow * f.v_grow).norm() < 1e-8 * T.m.norm());
    }

  // Followed to the left, the decaying solution grows by 1 / lambda_decay per cell.
  const double E = g.open_gap(1).mid();
  const FloquetSplit f = floquet_split(V, 0.0, E);
  const HillPotential W{[&](double x) { return V(x); }, {}};
  const HillState s0{f.v_decay(0), f.v_decay(1)};
  for (int k = 1; k <= 10; ++k) {
    const HillState s1 = propagate_hill(s0, W, E, 0.0, -k);
    const double log_ratio = std::log(std::hypot(s1.u, s1.du)) + s1.log_scale;
    CHECK(log_ratio == Approx(-k * std::log(std::abs(f.lambda_decay))).epsilon(1e-6));
  }
}

TEST_CASE("Dirac gap with a constant mass") {
  const GapTable g = dirac_gap_table(testing::constant_potential(1.5), -4.0, 4.0);
  REQUIRE(g.n_max() == 1);
  CHECK(g.gaps[1].lo == Approx(-1.5).epsilon(1e-9));
  CHECK(g.gaps[1].hi == Approx(1.5).epsilon(1e-9));
}

TEST_CASE("Dirac gaps of the reference mass are symmetric") {
  const TrigPotential V = testing::dirac_potential();
  const GapTable g = dirac_gap_table(V, -4.0, 4.0);
  REQUIRE(g.n_max() == 3);
  for (int n = 1; n <= 3; ++n) {
    const Gap& a = g.gaps[n];
    const Gap& b = g.gaps[4 - n];
    CHECK(a.lo == Approx(-b.hi).epsilon(1e-8));
    CHECK(a.hi == Approx(-b.lo).epsilon(1e-8));
    CHECK(std::abs(dirac_discriminant(V, a.mid())) > 2.0);
    CHECK(std::abs(std::abs(dirac_discriminant(V, a.lo)) - 2.0) < 1e-8);
    CHECK(std::abs(std::abs(dirac_discriminant(V, a.hi)) - 2.0) < 1e-8);
    if (n > 1) CHECK(g.gaps[n - 1].hi < a.lo);
  }
  CHECK(g.gaps[2].lo == Approx(-g.gaps[2].hi).epsilon(1e-10));
}

TEST_CASE("Dirac Floquet split") {
  const TrigPotential V = testing::dirac_potential();
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> t(0.0, 1.0), E(-0.9, 0.9);
  for (int i = 0; i < 10; ++i) {
    const TransferMatrixC T = monodromy_dirac(V, t(rng), E(rng));
    const DiracFloquetSplit f = dirac_floquet_split(T);
    CHECK(f.lambda_decay * f.lambda_grow == Approx(1.0).epsilon(1e-8));
    CHECK((T.m * f.v_decay - f.lambda_decay * f.v_decay).norm() < 1e-8 * T.m.norm());
    CHECK(std::abs(f.v_decay(0).imag()) < 1e-14);
    CHECK(f.v_decay(0).real() > 0.0);
  }
}

TEST_CASE("cell Dirichlet eigenvalue is a zero of the sine solution") {
  const TrigPotential V = testing::reference_potential();
  const GapTable g = band_edges(V, 3, -60.0, 240.0);
  for (int n = 1; n <= 3; ++n)
    for (double t : {0.1, 0.4, 0.8}) {
      const double E = cell_dirichlet_eigenvalue(V, t, g, n);
      CHECK(E >= g.gaps[n].lo);
      CHECK(E <= g.gaps[n].hi);
      CHECK(std::abs(monodromy_hill(V, t, E).m(0, 1)) < 1e-8);
    }
}

}
