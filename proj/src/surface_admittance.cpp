#include "pulimp/surface_admittance.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pulimp/errors.hpp"

namespace pulimp {

namespace {

void require_positive(double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw Error(ErrorKind::validation, "frequency must be positive");
}

}  // namespace

Wavenumbers wavenumbers(const Conductor& c, double outer_permittivity, double omega) {
  require_positive(omega);
  const cplx k2 = omega * c.permeability() * cplx(omega * c.permittivity(), -c.conductivity);
  cplx k = std::sqrt(k2);
  if (k.imag() > 0.0) k = -k;
  return {k, omega * std::sqrt(kMu0 * outer_permittivity)};
}

cplx ys_entry(int n, const Conductor& c, double outer_permittivity, double omega) {
  const auto [k, k_out] = wavenumbers(c, outer_permittivity, omega);
  const int m = std::abs(n);
  // z J'_m/J_m = m - z J_{m+1}/J_m; the m terms are combined exactly.
  const double mu = c.permeability();
  const cplx bracket = static_cast<double>(m) * (1.0 / mu - 1.0 / kMu0) -
                       bessel_j_zsuccessive(m, k * c.radius) / mu +
                       bessel_j_zsuccessive(m, cplx(k_out * c.radius)) / kMu0;
  return 2.0 * std::numbers::pi / cplx(0.0, omega) * bracket;
}

SurfaceAdmittance assemble_ys(const CrossSection& cs, const HarmonicLayout& layout, double omega) {
  if (layout.conductors() != cs.size()) throw std::invalid_argument("assemble_ys: layout does not match cross-section");
  SurfaceAdmittance ys;
  ys.frequency = omega / (2.0 * std::numbers::pi);
  ys.diagonal.resize(layout.size());
  for (std::size_t p = 0; p < cs.size(); ++p) {
    const int order = layout.order(p);
    for (int n = 0; n <= order; ++n) {
      const cplx y = ys_entry(n, cs[p], cs.outer_permittivity, omega);
      ys.diagonal[layout.index(p, n)] = y;
      ys.diagonal[layout.index(p, -n)] = y;
    }
  }
  return ys;
}

}  // namespace pulimp
