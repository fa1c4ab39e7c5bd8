#pragma once

#include <vector>

#include "pulimp/geometry.hpp"
#include "pulimp/specfun.hpp"

namespace pulimp {

struct Wavenumbers {
  cplx inner;    // inside the conductor, Im <= 0
  double outer;  // surrounding lossless medium
};

/// k = sqrt(w mu (w eps - j sigma)) with Im(k) <= 0, k_out = w sqrt(mu0 eps_out).
/// Throws Error(validation) for omega <= 0.
Wavenumbers wavenumbers(const Conductor& c, double outer_permittivity, double omega);

/// Diagonal entry of the discrete surface admittance operator for harmonic n:
///   (2 pi / j w) [ (k a / mu) J'_|n|(ka)/J_|n|(ka) - (k_out a / mu0) J'_|n|(k_out a)/J_|n|(k_out a) ]
/// in siemens. Depends on |n| and on this conductor only.
cplx ys_entry(int n, const Conductor& c, double outer_permittivity, double omega);

/// Diagonal of Y_s, indexed by the harmonic layout.
struct SurfaceAdmittance {
  std::vector<cplx> diagonal;
  double frequency = 0.0;  // Hz
};

SurfaceAdmittance assemble_ys(const CrossSection& cs, const HarmonicLayout& layout, double omega);

}  // namespace pulimp
