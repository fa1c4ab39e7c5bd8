#pragma once

#include <complex>

namespace pulimp {

using cplx = std::complex<double>;

/// Logarithmic derivative J'_n(z) / J_n(z) of the Bessel function of the first
/// kind, n >= 0. J_n itself is never formed, so the result stays finite for
/// arguments where J_n overflows (|z| up to ~1e4 and beyond).
///
/// Small |z| (below max(10, 2n)) uses a downward recurrence on J_{k+1}/J_k;
/// larger |z| uses the modified Lentz continued fraction.
/// Throws Error(solver, "ratio pole") when z sits on a zero of J_n, and
/// for z == 0 with n >= 1.
cplx bessel_j_ratio(int n, cplx z);

/// z * J'_n(z) / J_n(z), with the finite limit at z = 0 (0 for n = 0, n otherwise).
cplx bessel_j_zratio(int n, cplx z);

/// z * J_{n+1}(z) / J_n(z) = n - z J'_n(z)/J_n(z), 0 at z = 0. Same evaluation
/// path and pole guard as bessel_j_ratio; free of the cancellation that the
/// n - z J'/J form suffers for small |z|.
cplx bessel_j_zsuccessive(int n, cplx z);

/// J_{n+1}(z) / J_n(z) from the continued fraction, always via Lentz.
cplx bessel_j_successive_ratio(int n, cplx z);

/// Principal-ish log of J_n(z) (imaginary part not unwrapped). Differences of
/// two such values give overflow-safe ratios J_n(z1)/J_n(z2).
/// Returns -inf real part where J_n(z) == 0 (z == 0, n >= 1).
cplx log_bessel_j(int n, cplx z);

struct KelvinValues {
  double ber;
  double bei;
  double dber;  // d ber / d xi
  double dbei;  // d bei / d xi
};

/// ber + j bei = J_0(xi e^{j 3pi/4}), with derivatives in xi. xi >= 0.
/// Power series up to xi = 25, Hankel asymptotics beyond.
KelvinValues kelvin(double xi);

}  // namespace pulimp
