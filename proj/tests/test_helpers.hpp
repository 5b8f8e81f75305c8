#pragma once

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "bulkedge/potential.hpp"

namespace testing {

inline bulkedge::TrigPotential reference_potential() {
  bulkedge::TrigPotential V;
  V.cos_coeffs = {50.0, 10.0};
  return V;
}

inline bulkedge::TrigPotential dirac_potential() {
  bulkedge::TrigPotential V;
  V.constant = 1.0;
  V.cos_coeffs = {1.0};
  return V;
}

inline bulkedge::TrigPotential constant_potential(double c) {
  bulkedge::TrigPotential V;
  V.constant = c;
  return V;
}

// Random trigonometric polynomial with `harmonics` terms and coefficients in [-amp, amp].
inline bulkedge::TrigPotential random_potential(std::mt19937_64& rng, int harmonics, double amp, double constant = 0.0) {
  std::uniform_real_distribution<double> u(-amp, amp);
  bulkedge::TrigPotential V;
  V.constant = constant;
  for (int j = 0; j < harmonics; ++j) {
    V.cos_coeffs.push_back(u(rng));
    V.sin_coeffs.push_back(u(rng));
  }
  return V;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  const std::filesystem::path p = std::filesystem::path(BULKEDGE_TEST_OUTPUT) / name;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace testing
