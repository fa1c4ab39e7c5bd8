#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "pulimp/errors.hpp"
#include "pulimp/oracles.hpp"
#include "pulimp/surface_admittance.hpp"
#include "support.hpp"

using namespace pulimp;
using std::numbers::pi;

namespace {

Conductor copper(double radius = 10e-3) {
  Conductor c;
  c.id = 1;
  c.radius = radius;
  c.conductivity = 58e6;
  return c;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("wavenumbers") {
  Conductor vacuum;
  vacuum.radius = 1e-3;
  const auto w = wavenumbers(vacuum, kEps0, 2 * pi * 1e6);
  CHECK(std::abs(w.inner - w.outer) <= 1e-15 * w.outer);
  CHECK(w.outer == doctest::Approx(2 * pi * 1e6 * std::sqrt(kMu0 * kEps0)).epsilon(1e-15));

  auto cu = copper();
  cu.rel_permittivity = 0.0;
  // delta from 1/sqrt(pi f mu0 sigma), 60-digit evaluation
  const std::pair<double, double> cases[] = {{50.0, 9.345900061927292e-3}, {1e6, 6.608549310080563e-5}};
  for (const auto& [f, delta] : cases) {
    const cplx k = wavenumbers(cu, kEps0, 2 * pi * f).inner;
    CHECK(std::abs(k) == doctest::Approx(std::sqrt(2.0) / delta).epsilon(1e-12));
    CHECK(std::arg(k) == doctest::Approx(-pi / 4).epsilon(1e-12));
  }
  CHECK_THROWS_AS(wavenumbers(cu, kEps0, 0.0), Error);
  try {
    wavenumbers(cu, kEps0, -1.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::validation);
    CHECK(std::string(e.what()) == "frequency must be positive");
  }
}

TEST_CASE("interior wavenumber decays") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> logf(-3, 9);
  for (int i = 0; i < 200; ++i) {
    const auto cs = testing::random_cross_section(rng, 1, 1.0, true);
    const cplx k = wavenumbers(cs[0], kEps0, 2 * pi * std::pow(10.0, logf(rng))).inner;
    CHECK(k.imag() <= 0.0);
  }
}

TEST_CASE("matched media gives zero admittance") {
  Conductor c;
  c.radius = 5e-3;
  c.conductivity = 0.0;
  for (double f : {1.0, 1e3, 1e6, 1e8}) {
    const double omega = 2 * pi * f;
    const double k_out = wavenumbers(c, kEps0, omega).outer;
    for (int n = 0; n <= 6; ++n) {
      const double term = std::abs(2 * pi / omega * k_out * c.radius / kMu0 * bessel_j_ratio(n, k_out * c.radius));
      CHECK(std::abs(ys_entry(n, c, kEps0, omega)) <= 1e-12 * term);
    }
  }
  auto cs = two_wire(5e-3, 20e-3, 0.0, 1.0);
  const auto ys = assemble_ys(cs, HarmonicLayout::uniform(2, 3), 2 * pi * 1e5);
  for (cplx y : ys.diagonal) CHECK(std::abs(y) <= 1e-15);
}

TEST_CASE("DC limit is sigma pi a^2") {
  const double omega = 2 * pi * 1e-3;
  Conductor armor = copper(1.5e-3);
  armor.conductivity = 1e7;
  armor.rel_permeability = 100.0;
  for (const auto& c : {copper(), copper(0.5e-3), armor}) {
    const cplx y = ys_entry(0, c, kEps0, omega);
    const double dc = c.conductivity * pi * c.radius * c.radius;
    CHECK(std::abs(y - dc) <= 1e-4 * dc);
  }
  CHECK(copper().conductivity * pi * 1e-4 == doctest::Approx(18221.2373908208).epsilon(1e-13));
}

TEST_CASE("n = 0 entry inverts to the Kelvin internal impedance") {
  const auto c = copper();
  for (double f : {1.0, 50.0, 1e3, 1e5, 1e6}) {
    const cplx z = 1.0 / ys_entry(0, c, kEps0, 2 * pi * f);
    CAPTURE(f);
    CHECK(rel(z, wire_internal_impedance(c.radius, c.conductivity, f)) <= 1e-8);
  }
  // fully developed skin effect
  const double f = 1e6;
  const double rs = 1.0 / (c.conductivity * skin_depth(f, c.conductivity));
  const cplx z = 1.0 / ys_entry(0, c, kEps0, 2 * pi * f);
  CHECK(z.real() == doctest::Approx(rs / (2 * pi * c.radius)).epsilon(0.01));
}

TEST_CASE("entries depend on |n| only and absorb power") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    const auto cs = testing::random_cross_section(rng, 1, 1.0, true);
    const double omega = 2 * pi * std::pow(10.0, -2.0 + 8.0 * (i % 10) / 9.0);
    for (int n = 1; n <= 5; ++n) CHECK(ys_entry(n, cs[0], kEps0, omega) == ys_entry(-n, cs[0], kEps0, omega));
    CHECK(ys_entry(0, cs[0], kEps0, omega).real() > 0.0);
  }
}

TEST_CASE("entries vary smoothly with frequency") {
  Conductor armor = copper(1.5e-3);
  armor.conductivity = 1e7;
  armor.rel_permeability = 100.0;
  for (const auto& c : {copper(), copper(0.5e-3), armor}) {
    for (int n = 0; n <= 7; ++n) {
      cplx prev = ys_entry(n, c, kEps0, 2 * pi * 1e-3);
      for (int s = 1; s <= 12 * 20; ++s) {
        const double f = 1e-3 * std::pow(10.0, s / 20.0);
        const cplx y = ys_entry(n, c, kEps0, 2 * pi * f);
        CAPTURE(n);
        CAPTURE(f);
        CHECK(std::abs(y - prev) < 0.5 * std::abs(prev));
        prev = y;
      }
    }
  }
}

TEST_CASE("assembled diagonal follows the layout") {
  CrossSection one;
  one.conductors.push_back(copper());
  const double omega = 2 * pi * 50;
  const auto ys = assemble_ys(one, HarmonicLayout::uniform(1, 2), omega);
  REQUIRE(ys.diagonal.size() == 5);
  CHECK(ys.frequency == doctest::Approx(50.0));
  for (int n = -2; n <= 2; ++n) CHECK(ys.diagonal[static_cast<std::size_t>(n + 2)] == ys_entry(n, one[0], kEps0, omega));
  CHECK(ys.diagonal[0] == ys.diagonal[4]);

  const auto cable = three_phase_armored_cable();
  const auto big = assemble_ys(cable, HarmonicLayout::uniform(cable.size(), 3), omega);
  CHECK(big.diagonal.size() == 239 * 7);

  // locality: an entry ignores the other conductors
  CrossSection alone;
  alone.conductors.push_back(cable[200]);
  const auto solo = assemble_ys(alone, HarmonicLayout::uniform(1, 3), omega);
  const auto layout = HarmonicLayout::uniform(cable.size(), 3);
  for (int n = -3; n <= 3; ++n) CHECK(big.diagonal[layout.index(200, n)] == solo.diagonal[static_cast<std::size_t>(n + 3)]);
}

TEST_CASE("lossless conductor on a Bessel zero signals a pole") {
  Conductor c;
  c.radius = 1.0;
  c.conductivity = 0.0;
  c.rel_permittivity = 1e4;
  const double omega = 2.404825557695773 / (c.radius * std::sqrt(kMu0 * kEps0 * c.rel_permittivity));
  CHECK_THROWS_AS(ys_entry(0, c, kEps0, omega), Error);
}
