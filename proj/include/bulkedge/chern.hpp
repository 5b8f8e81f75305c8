#pragma once

#include <vector>

#include <Eigen/Core>

#include "bulkedge/bloch.hpp"
#include "bulkedge/potential.hpp"
#include "bulkedge/winding.hpp"

namespace bulkedge {

struct CurvatureSample {
  double t = 0.0;
  double k = 0.0;
  double phase = 0.0;  // plaquette field strength in (-pi, pi]
};

struct PlaquetteResult {
  int chern = 0;
  double raw = 0.0;       // sum of field strengths / 2 pi before rounding
  double min_link = 1.0;  // smallest |det| of an overlap matrix
  int Nt = 0, Nk = 0;
  std::vector<CurvatureSample> curvature;  // row-major in (t, k)
};

// Link-variable Chern number of the lowest n bands on an Nt x Nk grid of
// the (t, k) torus. Throws grid_too_coarse if an overlap determinant falls
// below 0.1.
PlaquetteResult chern_plaquette(const TrigPotential& V, int n, int Nt = 40, int Nk = 40, int M = 32);

enum class FrameConstruction { transport, covariant };

struct FrameResult {
  int chern = 0;
  PhasePath det_path;                    // k -> det U(k)
  double max_unitarity_error = 0.0;      // max ||U*U - I||
  double max_scalar_deviation = 0.0;     // max ||U(k) - e^{2 pi i k} I||
  double min_transport_singular = 1.0;   // smallest singular value met during transport
};

// Obstruction unitary U(k) defined by Psi(0, k) = Psi(1, k) U(k).
Eigen::MatrixXcd obstruction_unitary(const TrigPotential& V, double k, int n, int M = 32,
                                     FrameConstruction how = FrameConstruction::transport, int Nt = 64,
                                     double* min_singular = nullptr);

// Winding in k of det U(k). Throws frame_discontinuity when a transport
// step has a singular value below 0.5.
FrameResult chern_frame(const TrigPotential& V, int n, int Nk = 40, int M = 32,
                        FrameConstruction how = FrameConstruction::transport, int Nt = 64);

// Spectral projector onto the lowest n bands at (t, k).
Eigen::MatrixXcd band_projector(const TrigPotential& V, double t, double k, int n, int M = 32);

// max |P(t, -k) - R conj(P(t, k)) R| with R the reflection m -> -m.
double reality_deviation(const TrigPotential& V, double t, double k, int n, int M = 32);

}  // namespace bulkedge
