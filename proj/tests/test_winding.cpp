#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "bulkedge/error.hpp"
#include "bulkedge/winding.hpp"
#include "oracles.hpp"

using namespace bulkedge;
using doctest::Approx;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

CircleMap turns(int n) {
  return [n](double t) { return std::polar(1.0, two_pi * n * t); };
}

// Random complex trigonometric polynomial on the circle, kept away from zero.
CircleMap random_trig_map(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> degree(1, 4);
  std::normal_distribution<double> c(0.0, 1.0);
  for (;;) {
    const int d = degree(rng);
    std::vector<std::pair<int, std::complex<double>>> terms;
    for (int j = -d; j <= d; ++j) terms.emplace_back(j, std::complex<double>(c(rng), c(rng)));
    CircleMap f = [terms](double t) {
      std::complex<double> s = 0.0;
      for (const auto& [j, a] : terms) s += a * std::polar(1.0, two_pi * j * t);
      return s;
    };
    double m = 1e300;
    for (int i = 0; i <= 4000; ++i) m = std::min(m, std::abs(f(i / 4000.0)));
    if (m > 0.1) return f;
  }
}

}  // namespace

TEST_SUITE("winding") {

TEST_CASE("build_path sampling") {
  const PhasePath one = build_path(turns(1), 16);
  CHECK(one.samples.size() >= 8);
  CHECK(one.closed);

  const PhasePath fast = build_path(turns(10), 16);
  for (std::size_t i = 0; i + 1 < fast.samples.size(); ++i)
    CHECK(fast.samples[i + 1].t - fast.samples[i].t < 1.0 / 40.0);

  PathOptions two;
  two.initial_samples = 2;
  const PhasePath flat = build_path([](double) { return std::complex<double>(0.3, 0.4); }, two);
  CHECK(flat.samples.size() == 3);
  CHECK(total_turns(flat) == 0.0);
}

TEST_CASE("path invariants") {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 10; ++k) {
    const CircleMap f = random_trig_map(rng);
    const PhasePath p = build_path(f, 20);
    for (std::size_t i = 0; i < p.samples.size(); ++i) {
      const auto& s = p.samples[i];
      CHECK(std::abs(std::abs(s.z) - 1.0) < 1e-9);
      CHECK(std::abs(s.z - std::polar(1.0, s.alpha)) < 1e-8);
      if (i > 0) CHECK(std::abs(s.alpha - p.samples[i - 1].alpha) < std::numbers::pi / 2);
    }
  }
}

TEST_CASE("winding of e^{2 pi i n t}") {
  for (int n = -3; n <= 3; ++n) CHECK(winding_number(build_path(turns(n), 16)) == n);
  CHECK(winding_number(build_path([](double t) { return std::polar(1.0, std::sin(two_pi * t)); }, 16)) == 0);
}

TEST_CASE("open paths and refinement limits are reported") {
  CHECK_THROWS_AS(winding_number(build_path([](double t) { return std::polar(1.0, 0.5 * t); }, 16)), Error);
  CHECK_THROWS_AS(build_path(turns(10), 1), Error);
  CHECK_THROWS_AS(build_path([](double t) { return std::complex<double>(t - 0.5, 0.0); }, 16), Error);
}

TEST_CASE("midpoint checks expose turns hidden between samples") {
  PathOptions o;
  o.initial_samples = 8;
  o.check_midpoints = false;
  CHECK(winding_number(build_path(turns(7), o)) == 0);
  o.check_midpoints = true;
  CHECK(winding_number(build_path(turns(7), o)) == 7);
  CHECK(winding_number(build_path(turns(-7), o)) == -7);
}

TEST_CASE("winding is a homomorphism on random trigonometric maps") {
  std::mt19937_64 rng(43);
  for (int k = 0; k < 25; ++k) {
    const CircleMap f = random_trig_map(rng), g = random_trig_map(rng);
    const int wf = winding_number(build_path(f, 20, 64));
    const int wg = winding_number(build_path(g, 20, 64));
    CHECK(wf == static_cast<int>(std::lround(oracle::brute_turns(f, 100000))));
    const CircleMap fg = [&](double t) { return f(t) * g(t); };
    const CircleMap finv = [&](double t) { return 1.0 / f(t); };
    CHECK(winding_number(build_path(fg, 20, 64)) == wf + wg);
    CHECK(winding_number(build_path(finv, 20, 64)) == -wf);
    const std::complex<double> rot = std::polar(1.0, 2.1);
    CHECK(winding_number(build_path([&](double t) { return rot * f(t); }, 20, 64)) == wf);
  }
}

TEST_CASE("crossings of e^{6 pi i t} through 1") {
  const CircleMap f = turns(3);
  const auto c = crossings(build_path(f, 16), f, 1.0);
  REQUIRE(c.size() == 3);
  std::vector<double> ts;
  for (const auto& x : c) {
    CHECK(x.sign == 1);
    ts.push_back(x.t);
  }
  std::sort(ts.begin(), ts.end());
  CHECK(ts[0] == Approx(0.0).scale(1.0));
  CHECK(ts[1] == Approx(1.0 / 3.0).epsilon(1e-10));
  CHECK(ts[2] == Approx(2.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("crossings of a wobbling loop through -1") {
  const CircleMap f = [](double t) { return std::polar(1.0, two_pi * t + 2.0 * std::sin(two_pi * t)); };
  const auto c = crossings(build_path(f, 16), f, -1.0);
  CHECK(c.size() == 3);
  int sum = 0;
  for (const auto& x : c) sum += x.sign;
  CHECK(sum == 1);
  // Fine-grid scan for sign changes of the imaginary part with negative real part.
  int scan = 0;
  const int N = 100000;
  for (int i = 0; i < N; ++i) {
    const std::complex<double> a = f(static_cast<double>(i) / N), b = f(static_cast<double>(i + 1) / N);
    if (a.real() < 0 && b.real() < 0 && (a.imag() > 0) != (b.imag() > 0)) scan += a.imag() > 0 ? 1 : -1;
  }
  CHECK(scan == sum);
}

TEST_CASE("constant map has no crossings") {
  const CircleMap f = [](double) { return std::complex<double>(0.0, 1.0); };
  CHECK(crossings(build_path(f, 16), f, 1.0).empty());
}

TEST_CASE("signed crossings sum to the winding at any regular value") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> phase(-3.1, 3.1);
  for (int k = 0; k < 15; ++k) {
    const CircleMap f = random_trig_map(rng);
    const PhasePath p = build_path(f, 20, 64);
    const int w = winding_number(p);
    for (int j = 0; j < 3; ++j) {
      const std::complex<double> z = std::polar(1.0, phase(rng));
      std::vector<Crossing> c;
      try {
        c = crossings(p, f, z);
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::non_regular_value);
        continue;
      }
      int sum = 0;
      for (const auto& x : c) sum += x.sign;
      CHECK(sum == w);
      CHECK(static_cast<int>(c.size()) >= std::abs(w));
    }
  }
}

TEST_CASE("tangential crossing is rejected") {
  const CircleMap f = [](double t) { return std::polar(1.0, std::cos(two_pi * t) - 1.0); };
  CHECK_THROWS_AS(crossings(build_path(f, 16), f, 1.0), Error);
}

}
