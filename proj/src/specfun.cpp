#include "pulimp/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "pulimp/errors.hpp"

namespace pulimp {

namespace {

using std::numbers::pi;

constexpr double kTiny = 1e-300;
constexpr double kSeriesLimit = 25.0;
constexpr double kHankelLimit = 20.0;

[[noreturn]] void ratio_pole(int n, cplx z) {
  throw Error(ErrorKind::solver, "ratio pole: J_" + std::to_string(n) + "(z) vanishes near z = (" +
                                     std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")");
}

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// J_{n+1}/J_n by downward recurrence h_{k-1} = 1 / (2k/z - h_k), started far
// enough above both n and |z| that the starting error has decayed.
cplx successive_ratio_downward(int n, cplx z) {
  const int top = n + static_cast<int>(std::ceil(std::abs(z))) + 60;
  cplx h = z / (2.0 * (top + 1));
  for (int k = top; k > n; --k) {
    cplx denom = 2.0 * k / z - h;
    if (denom == cplx(0.0)) denom = kTiny;
    h = 1.0 / denom;
  }
  return h;
}

// Modified Lentz on J_n/J_{n+1} = b_1 - 1/(b_2 - 1/(b_3 - ...)), b_k = 2(n+k)/z.
cplx successive_ratio_lentz(int n, cplx z) {
  const cplx inv_z = 1.0 / z;
  cplx f = 2.0 * (n + 1) * inv_z;
  if (f == cplx(0.0)) f = kTiny;
  cplx c = f;
  cplx d = 0.0;
  const int max_iter = 100000 + 20 * static_cast<int>(std::abs(z));
  for (int k = 2; k <= max_iter; ++k) {
    const cplx b = 2.0 * (n + k) * inv_z;
    d = b - d;
    if (d == cplx(0.0)) d = kTiny;
    c = b - 1.0 / c;
    if (c == cplx(0.0)) c = kTiny;
    d = 1.0 / d;
    const cplx delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) return 1.0 / f;
  }
  throw Error(ErrorKind::solver, "bessel continued fraction did not converge for n = " + std::to_string(n));
}

cplx successive_ratio(int n, cplx z) {
  const double switchover = std::max(10.0, 2.0 * n);
  return std::abs(z) < switchover ? successive_ratio_downward(n, z) : successive_ratio_lentz(n, z);
}

void check_order(int n) {
  if (n < 0) throw std::invalid_argument("bessel order must be non-negative");
}

cplx j0_series(cplx z) {
  const cplx q = -0.25 * z * z;
  cplx term = 1.0;
  cplx sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) && k > std::abs(z)) break;
  }
  return sum;
}

cplx j1_series(cplx z) {
  const cplx q = -0.25 * z * z;
  cplx term = 0.5 * z;
  cplx sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * (k + 1));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) && k > std::abs(z)) break;
  }
  return sum;
}

// log J_0(z) from the Hankel expansion, |z| large. The dominant exponential
// is factored out so that the result is finite even when J_0 is not.
cplx log_j0_hankel(cplx z) {
  if (z.real() < 0.0) z = -z;  // J_0 is even
  const cplx inv_z = 1.0 / z;
  cplx p = 0.0;
  cplx q = 0.0;
  cplx term = 1.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 200; ++k) {
    if (k > 0) {
      const double odd = 2.0 * k - 1.0;
      term *= -odd * odd * inv_z / (8.0 * k);
    }
    const double mag = std::abs(term);
    if (mag > last) break;  // asymptotic series starts diverging
    last = mag;
    // P collects (-1)^{k/2} a_k z^{-k} for even k, Q (-1)^{(k-1)/2} a_k z^{-k} for odd k.
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      p += sign * term;
    } else {
      q += sign * term;
    }
    if (mag < 1e-17) break;
  }
  const cplx j(0.0, 1.0);
  const cplx chi = z - 0.25 * pi;
  cplx log_bracket;
  if (chi.imag() <= 0.0) {
    log_bracket = j * chi + std::log(0.5 * (p + j * q) + std::exp(-2.0 * j * chi) * 0.5 * (p - j * q));
  } else {
    log_bracket = -j * chi + std::log(0.5 * (p - j * q) + std::exp(2.0 * j * chi) * 0.5 * (p + j * q));
  }
  return 0.5 * std::log(2.0 / (pi * z)) + log_bracket;
}

// 1/J_0 = 1 + 2 sum_k J_2k/J_0 with the quotients built from downward
// successive ratios. Better than the series close to the real axis.
cplx log_j0_normalized(cplx z) {
  const int top = static_cast<int>(std::ceil(std::abs(z))) + 40;
  std::vector<cplx> h(static_cast<std::size_t>(top) + 1);
  cplx next = z / (2.0 * (top + 1));
  for (int k = top; k >= 0; --k) {
    h[static_cast<std::size_t>(k)] = next;
    next = 1.0 / (2.0 * k / z - next);
  }
  cplx sum = 1.0;
  cplx r = 1.0;
  for (int k = 1; k <= top; ++k) {
    r *= h[static_cast<std::size_t>(k - 1)];
    if (k % 2 == 0) sum += 2.0 * r;
  }
  return -std::log(sum);
}

cplx log_j0(cplx z) {
  const double size = std::abs(z);
  if (size > kHankelLimit) return log_j0_hankel(z);
  if (std::abs(z.imag()) < 0.5 * size && size > 1.0) return log_j0_normalized(z);
  return std::log(j0_series(z));
}

}  // namespace

cplx bessel_j_successive_ratio(int n, cplx z) {
  check_order(n);
  if (z == cplx(0.0)) return 0.0;
  return successive_ratio_lentz(n, z);
}

cplx bessel_j_ratio(int n, cplx z) {
  check_order(n);
  if (z == cplx(0.0)) {
    if (n == 0) return 0.0;
    ratio_pole(n, z);
  }
  const cplx h = successive_ratio(n, z);
  if (!finite(h) || std::abs(h) > 1e12 * (1.0 + std::abs(z))) ratio_pole(n, z);
  const cplx r = static_cast<double>(n) / z - h;
  if (!finite(r)) ratio_pole(n, z);
  return r;
}

cplx bessel_j_zsuccessive(int n, cplx z) {
  check_order(n);
  if (z == cplx(0.0)) return 0.0;
  const cplx h = successive_ratio(n, z);
  if (!finite(h) || std::abs(h) > 1e12 * (1.0 + std::abs(z))) ratio_pole(n, z);
  return z * h;
}

cplx bessel_j_zratio(int n, cplx z) {
  if (z == cplx(0.0)) {
    check_order(n);
    return static_cast<double>(n);
  }
  return z * bessel_j_ratio(n, z);
}

cplx log_bessel_j(int n, cplx z) {
  check_order(n);
  if (z == cplx(0.0)) {
    return n == 0 ? cplx(0.0) : cplx(-std::numeric_limits<double>::infinity(), 0.0);
  }
  cplx result = log_j0(z);
  if (n == 0) return result;
  // h_k = J_{k+1}/J_k for k = n-1 .. 0, by stable downward recurrence.
  cplx h = successive_ratio(n - 1, z);
  result += std::log(h);
  for (int k = n - 2; k >= 0; --k) {
    h = 1.0 / (2.0 * (k + 1) / z - h);
    result += std::log(h);
  }
  return result;
}

KelvinValues kelvin(double xi) {
  if (!(xi >= 0.0)) throw std::invalid_argument("kelvin: xi must be non-negative");
  // J_0(xi e^{j3pi/4}) = J_0(w) and its xi-derivative is e^{j3pi/4} J_1(w), w = xi e^{-j pi/4}.
  const cplx w = std::polar(xi, -0.25 * pi);
  const cplx rot = std::polar(1.0, 0.75 * pi);
  cplx j0;
  cplx j1;
  if (xi <= kSeriesLimit) {
    j0 = j0_series(w);
    j1 = j1_series(w);
  } else {
    j0 = std::exp(log_j0_hankel(w));
    j1 = j0 * successive_ratio(0, w);
  }
  const cplx d = rot * j1;
  return {j0.real(), j0.imag(), d.real(), d.imag()};
}

}  // namespace pulimp
