#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace bulkedge {

using CircleMap = std::function<std::complex<double>(double)>;

struct PhaseSample {
  double t = 0.0;
  std::complex<double> z;
  double alpha = 0.0;  // continuous lift, z = exp(i alpha)
};

struct PhasePath {
  std::vector<PhaseSample> samples;
  bool closed = false;
};

struct Crossing {
  double t = 0.0;
  int sign = 0;
  std::complex<double> z;
};

struct PathOptions {
  int initial_samples = 8;  // including both endpoints
  int refine_limit = 16;    // maximal number of halvings of an initial interval
  double t0 = 0.0;
  double t1 = 1.0;
  // +1 / -1 when the phase is known to increase / decrease along t. Steps
  // against this direction are then treated as aliased full turns and
  // refined. 0 disables the check.
  int orientation = 0;
  // Confirm every accepted interval with its midpoint, which catches full
  // turns hidden between two samples. Costs one extra evaluation per interval.
  bool check_midpoints = true;
};

// Samples f on [t0, t1], bisecting until neighbouring samples differ in
// phase by less than pi/2. Values of f are projected onto the unit circle.
PhasePath build_path(const CircleMap& f, const PathOptions& options);
PhasePath build_path(const CircleMap& f, int refine_limit, int initial_samples = 8);

// (alpha_end - alpha_start) / 2 pi without rounding.
double total_turns(const PhasePath& path);

// Winding number of a closed path; non_integer_winding if the turn count is
// not within 0.01 of an integer.
int winding_number(const PhasePath& path);

// Solutions of f(t) = z along the path with their orientation (+1 when the
// phase increases through z). A crossing closer than `slope_tol` to
// tangency raises non_regular_value. On closed paths a crossing at the end
// point is reported at the start point.
std::vector<Crossing> crossings(const PhasePath& path, const CircleMap& f, std::complex<double> z,
                                double slope_tol = 1e-6, double fd_step = 1e-6);

}  // namespace bulkedge
