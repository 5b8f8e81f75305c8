#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "doctest.h"

#include "bulkedge/error.hpp"
#include "bulkedge/schrodinger_indices.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace bulkedge;
using doctest::Approx;

namespace {

const SchrodingerSystem& reference_system() {
  static const SchrodingerSystem sys(SchrodingerModel{testing::reference_potential()}, 3, -60.0, 240.0);
  return sys;
}

// Downward crossings of E along labelled branches minus upward ones.
int branch_crossings(const FlowResult& r, double E) {
  std::map<int, std::vector<FlowSample>> by_branch;
  for (const auto& s : r.samples) by_branch[s.branch].push_back(s);
  int flow = 0;
  for (const auto& [id, v] : by_branch)
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      const bool a = v[i].E > E, b = v[i + 1].E > E;
      if (a != b) flow += a ? 1 : -1;
    }
  return flow;
}

}  // namespace

TEST_SUITE("schrodinger") {

TEST_CASE("theta of a decaying free solution") {
  CHECK(std::abs(theta_of(0.0, 1.0) - 1.0) < 1e-15);
  CHECK(std::abs(theta_of(1.0, 0.0) + 1.0) < 1e-15);
  const TrigPotential zero;
  for (double t : {0.0, 0.4})
    for (double x : {-1.0, 0.0, 2.5}) {
      const ThetaSample s = theta_bulk(zero, t, -1.0, x, Side::plus);
      CHECK(std::abs(s.value - std::complex<double>(0.0, 1.0)) < 1e-9);
    }
  CHECK_THROWS_AS(theta_bulk(zero, 0.0, 4.0, 0.0, Side::plus), Error);
}

TEST_CASE("theta is unimodular, translation covariant and separates the two sides") {
  const TrigPotential V = testing::reference_potential();
  const GapTable& g = reference_system().gaps();
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(0.0, 1.0), x(-2.0, 2.0);
  for (int n = 1; n <= 3; ++n)
    for (int i = 0; i < 6; ++i) {
      const double E = g.gaps[n].lo + (0.05 + 0.9 * u(rng)) * g.gaps[n].width();
      const double t = u(rng), xi = x(rng);
      const auto plus = theta_bulk(V, t, E, xi, Side::plus);
      const auto minus = theta_bulk(V, t, E, xi, Side::minus);
      CHECK(std::abs(std::abs(plus.value) - 1.0) < 1e-9);
      CHECK(std::abs(plus.value - theta_bulk(V, 0.0, E, xi - t, Side::plus).value) < 1e-7);
      CHECK(std::abs(plus.value - minus.value) > 1e-6);
    }
}

TEST_CASE("bulk index and zero count equal the gap label") {
  const SchrodingerSystem& sys = reference_system();
  for (int n = 1; n <= 3; ++n) {
    const auto [mp, mm] = sys.maslov_indices(n);
    CHECK(mp == n);
    CHECK(mm == n);
    const Gap& g = sys.gaps().gaps[n];
    for (double s : {0.2, 0.5, 0.8}) CHECK(sys.bulk_index(n, g.lo + s * g.width()) == n);
    CHECK(zeros_in_cell(sys.model().V, 0.0, g.mid(), Side::plus) == n);
    CHECK(zeros_in_cell(sys.model().V, 0.37, g.mid(), Side::plus) == n);
  }
  CHECK(sys.bulk_index(0) == 0);
  CHECK(zeros_in_cell(sys.model().V, 0.0, sys.gaps().gaps[0].mid(), Side::plus) == 0);
  CHECK(zeros_in_cell(sys.model().V, 0.6, sys.gaps().gaps[0].mid() - 20.0, Side::plus) == 0);
}

TEST_CASE("zero count at the cell Dirichlet eigenvalue") {
  const SchrodingerSystem& sys = reference_system();
  for (int n = 1; n <= 3; ++n) {
    const double delta = cell_dirichlet_eigenvalue(sys.model().V, 0.3, sys.gaps(), n);
    if (std::min(delta - sys.gaps().gaps[n].lo, sys.gaps().gaps[n].hi - delta) < 1e-4) continue;
    CHECK(zeros_in_cell(sys.model().V, 0.3, delta, Side::plus) == n);
  }
}

TEST_CASE("no edge eigenvalues without a dislocation") {
  const SchrodingerSystem& sys = reference_system();
  for (int n = 1; n <= 3; ++n) {
    CHECK(sys.edge_eigenvalues_at(0.0, n, false).empty());
    const Gap& g = sys.gaps().gaps[n];
    for (double s : {0.1, 0.5, 0.9}) CHECK(std::abs(sys.omega(0.0, g.lo + s * g.width()) - 1.0) > 1e-6);
  }
}

TEST_CASE("edge index equals the gap label for the ramp and a steep switch") {
  const SchrodingerSystem& sys = reference_system();
  SchrodingerModel steep{testing::reference_potential()};
  steep.chi = SwitchFunction::ramp(0.0, 1e-3);
  const SchrodingerSystem sharp(steep, 3, -60.0, 240.0);
  for (int n = 1; n <= 3; ++n) {
    CHECK(sys.edge_index(n) == n);
    CHECK(sharp.edge_index(n) == n);
    const Gap& g = sys.gaps().gaps[n];
    CHECK(sys.edge_index(n, g.lo + 0.25 * g.width()) == n);
  }
}

TEST_CASE("omega crossings at a fixed energy number at least n") {
  const SchrodingerSystem& sys = reference_system();
  for (int n = 1; n <= 3; ++n) {
    const Gap& g = sys.gaps().gaps[n];
    const double E = g.lo + 0.41 * g.width();
    const CircleMap f = [&](double t) { return sys.omega(t, E); };
    const PhasePath p = sys.omega_path(n, E);
    CHECK(static_cast<int>(crossings(p, f, 1.0).size()) >= n);
  }
}

TEST_CASE("edge eigenvalues in gap 1 at t = 1/2 match finite differences") {
  const SchrodingerSystem& sys = reference_system();
  const auto ev = sys.edge_eigenvalues_at(0.5, 1);
  REQUIRE_FALSE(ev.empty());

  const TrigPotential V = testing::reference_potential();
  const SwitchFunction chi = SwitchFunction::ramp(-0.5, 0.5);
  const Gap& g = sys.gaps().gaps[1];
  const auto fd = oracle::fd_dirichlet([&](double x) { return eval_edge(V, chi, 0.5, x); }, -30.0, 30.0, 60 * 256 - 1,
                                       g.lo, g.hi, 5.0);
  REQUIRE(fd.interior.size() == ev.size());
  for (std::size_t i = 0; i < ev.size(); ++i) {
    const double E = ev[i].E;
    CHECK(std::abs(fd.interior[i] - E) < 1e-4);
    CHECK(std::abs(sys.omega(0.5, E, 0.0) - 1.0) < 1e-7);
    CHECK(std::abs(sys.omega(0.5, E, -2.3) - sys.omega(0.5, E, 1.7)) < 1e-6);

    REQUIRE(ev[i].state.has_value());
    const EdgeState& st = *ev[i].state;
    double norm2 = 0.0;
    for (std::size_t j = 0; j + 1 < st.samples.size(); ++j)
      norm2 += 0.5 * (st.samples[j + 1][0] - st.samples[j][0]) *
               (st.samples[j][1] * st.samples[j][1] + st.samples[j + 1][1] * st.samples[j + 1][1]);
    CHECK(norm2 == Approx(1.0).epsilon(1e-12));
    CHECK(st.decay_rate_right == Approx(st.expected_right).epsilon(0.05));
    CHECK(st.decay_rate_left == Approx(st.expected_left).epsilon(0.05));
    CHECK(std::abs(st.samples.front()[1]) < 1e-4);
    CHECK(std::abs(st.samples.back()[1]) < 1e-4);
  }
}

TEST_CASE("domain-wall flow equals the edge index at two energies") {
  const SchrodingerSystem& sys = reference_system();
  for (int n = 1; n <= 3; ++n) {
    const FlowResult r = sys.spectral_flow_domain_wall(n);
    CHECK(r.flow == n);
    const Gap& g = sys.gaps().gaps[n];
    CHECK(branch_crossings(r, g.lo + 0.3 * g.width()) == n);
    CHECK(branch_crossings(r, g.lo + 0.7 * g.width()) == n);
    for (const auto& c : r.crossings) CHECK(c.nu == (c.slope < 0.0 ? 1 : -1));
  }
}

TEST_CASE("Dirichlet and resonant flows") {
  const SchrodingerSystem& sys = reference_system();
  for (int n = 1; n <= 3; ++n) {
    const DirichletFlowResult r = sys.dirichlet_spectral_flow(n);
    CHECK(r.eigen.flow == n);
    CHECK(r.resonant.flow == -n);
    CHECK(r.max_eigen_slope < 0.0);
    CHECK(r.min_resonant_slope > 0.0);
    CHECK(r.join_error < 1e-4);
    for (const auto& s : r.eigen.samples) {
      CHECK(s.E >= sys.gaps().gaps[n].lo);
      CHECK(s.E <= sys.gaps().gaps[n].hi);
    }
  }
}

TEST_CASE("Dirichlet eigenvalue whenever -t is a zero of the decaying solution") {
  const SchrodingerSystem& sys = reference_system();
  const auto& V = sys.model().V;
  for (int n = 1; n <= 3; ++n) {
    for (double t : {0.15, 0.55}) {
      for (double E : sys.dirichlet_eigenvalues_at(t, n)) {
        const ThetaSample th = theta_bulk(V, t, E, 0.0, Side::plus);
        CHECK(std::abs(th.value - 1.0) < 1e-7);
        CHECK(std::abs(theta_bulk(V, 0.0, E, -t, Side::plus).value - 1.0) < 1e-6);
      }
    }
  }
}

TEST_CASE("closed gaps are rejected") {
  const SchrodingerSystem free_system(SchrodingerModel{TrigPotential{}}, 2, -10.0, 100.0);
  CHECK_THROWS_AS(free_system.bulk_index(1), Error);
  CHECK_THROWS_AS(free_system.domain_wall_flow(2), Error);
  try {
    free_system.edge_index(1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::gap_closed);
  }
}

}
