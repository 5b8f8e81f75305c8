#include "bulkedge/parallel.hpp"

#include <algorithm>
#include <atomic>

#include "bulkedge/error.hpp"

namespace bulkedge {

namespace {
std::atomic<int> g_jobs{1};
}

void set_jobs(int jobs) {
  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  g_jobs = jobs;
}

int jobs() { return g_jobs; }

bool& detail::inside_worker() {
  thread_local bool flag = false;
  return flag;
}

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::config: return "config";
    case ErrorCode::integration: return "integration_failure";
    case ErrorCode::energy_in_band: return "energy_in_band";
    case ErrorCode::gap_closed: return "gap_closed";
    case ErrorCode::window_too_small: return "window_too_small";
    case ErrorCode::refinement_exhausted: return "refinement_exhausted";
    case ErrorCode::non_integer_winding: return "non_integer_winding";
    case ErrorCode::non_regular_value: return "non_regular_value";
    case ErrorCode::no_regular_energy: return "no_regular_energy";
    case ErrorCode::frame_discontinuity: return "frame_discontinuity";
    case ErrorCode::grid_too_coarse: return "grid_too_coarse";
    case ErrorCode::zero_in_spectrum: return "zero_in_spectrum";
    case ErrorCode::modulus_deviation: return "modulus_deviation";
    case ErrorCode::branch_matching: return "branch_matching";
    case ErrorCode::assertion: return "assertion";
  }
  return "unknown";
}

}  // namespace bulkedge
