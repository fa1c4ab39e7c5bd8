#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "pulimp/current_density.hpp"
#include "pulimp/errors.hpp"

using namespace pulimp;
using std::numbers::pi;

namespace {

// Midpoint in r, trapezoid in theta (exact for the retained harmonics).
cplx disc_current(const CurrentDensityField& field, std::size_t p, double radius, int nr = 400, int nt = 64) {
  cplx total = 0.0;
  const double dr = radius / nr;
  const double dt = 2 * pi / nt;
  for (int i = 0; i < nr; ++i) {
    const double r = (i + 0.5) * dr;
    cplx ring = 0.0;
    for (int k = 0; k < nt; ++k) ring += field.at_polar(p, r, k * dt);
    total += ring * dt * r * dr;
  }
  return total;
}

const std::vector<cplx> kAntiparallel{1.0, -1.0};

}  // namespace

TEST_CASE("isolated conductor has circular symmetry") {
  CrossSection cs;
  Conductor c;
  c.radius = 10e-3;
  c.conductivity = 58e6;
  cs.conductors.push_back(c);
  const auto g = assemble_green(cs, HarmonicLayout::uniform(1, 3));
  const std::vector<cplx> drive{cplx(0.3, -1.2)};
  const CurrentDensityField field(cs, g, 2 * pi * 3.63e3, drive);
  for (double r : {0.0, 2e-3, 7e-3, 9.9e-3}) {
    const cplx ref = field.at_polar(0, r, 0.0);
    for (double t : {0.5, 1.7, 3.0, 5.5}) CHECK(std::abs(field.at_polar(0, r, t) - ref) <= 1e-12 * std::abs(ref));
  }
  // skin effect: the surface carries more than the axis
  CHECK(std::abs(field.at_polar(0, 9.9e-3, 0.0)) > 2 * std::abs(field.at_polar(0, 0.0, 0.0)));
  CHECK(std::abs(disc_current(field, 0, c.radius) - drive[0]) <= 5e-3 * std::abs(drive[0]));
}

TEST_CASE("disc integral returns the driven currents") {
  const auto cs = two_wire(10e-3, 25e-3, 58e6, 1.0);
  const auto g = assemble_green(cs, HarmonicLayout::uniform(2, 4));
  for (double f : {515.0, 3.63e3}) {
    const CurrentDensityField field(cs, g, 2 * pi * f, kAntiparallel);
    for (std::size_t p = 0; p < 2; ++p) {
      CAPTURE(f);
      CAPTURE(p);
      CHECK(std::abs(disc_current(field, p, 10e-3) - kAntiparallel[p]) <= 5e-3);
    }
    // boundary coefficients carry the currents exactly
    const auto layout = HarmonicLayout::uniform(2, 4);
    for (std::size_t p = 0; p < 2; ++p) {
      CHECK(std::abs(field.current_coefficients()(static_cast<Eigen::Index>(layout.zero_index(p))) - kAntiparallel[p]) <= 1e-10);
    }
  }

  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::vector<cplx> drive{cplx(u(rng), u(rng)), cplx(u(rng), u(rng))};
  const CurrentDensityField field(cs, g, 2 * pi * 1e3, drive);
  for (std::size_t p = 0; p < 2; ++p) CHECK(std::abs(disc_current(field, p, 10e-3) - drive[p]) <= 5e-3 * std::abs(drive[p]));
}

TEST_CASE("antiparallel currents crowd onto the facing sides") {
  const auto cs = two_wire(10e-3, 25e-3, 58e6, 1.0);
  const auto g = assemble_green(cs, HarmonicLayout::uniform(2, 4));
  for (double f : {515.0, 3.63e3}) {
    const CurrentDensityField field(cs, g, 2 * pi * f, kAntiparallel);
    const double r = 9.95e-3;
    // conductor 1 sits at -D/2 and faces +x, conductor 2 faces -x
    double best_angle = -1.0;
    double best = 0.0;
    for (int k = 0; k < 360; ++k) {
      const double t = 2 * pi * k / 360;
      const double v = std::abs(field.at_polar(0, r, t));
      if (v > best) {
        best = v;
        best_angle = t;
      }
    }
    CAPTURE(f);
    CHECK(best_angle == 0.0);
    CHECK(std::abs(field.at_polar(1, r, pi)) == doctest::Approx(best).epsilon(1e-10));
    CHECK(best > 1.2 * std::abs(field.at_polar(0, r, pi)));
  }
}

TEST_CASE("point lookup and exterior points") {
  const auto cs = two_wire(10e-3, 25e-3, 58e6, 1.0);
  const auto g = assemble_green(cs, HarmonicLayout::uniform(2, 2));
  const CurrentDensityField field(cs, g, 2 * pi * 50.0, kAntiparallel);
  CHECK(field.locate({-12.5e-3, 0.0}) == 0);
  CHECK(field.locate({12.5e-3, 5e-3}) == 1);
  CHECK(field.locate({0.0, 0.0}) == -1);
  CHECK(std::abs(field.at({12.5e-3 + 3e-3, 1e-3}) - field.at_polar(1, std::hypot(3e-3, 1e-3), std::atan2(1e-3, 3e-3))) <= 1e-9);
  try {
    field.at({0.0, 0.0});
    FAIL("exterior point accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::validation);
    CHECK(std::string(e.what()).find("exterior point") != std::string::npos);
  }

  const std::vector<Point> points{{-12.5e-3, 0.0}, {12.5e-3, 0.0}};
  const auto values = current_density(cs, g, 2 * pi * 50.0, kAntiparallel, points);
  REQUIRE(values.size() == 2);
  CHECK(std::abs(values[0] + values[1]) <= 1e-9 * std::abs(values[0]));
  CHECK_THROWS_AS(CurrentDensityField(cs, g, 2 * pi * 50.0, std::vector<cplx>{1.0}), Error);
}

TEST_CASE("density stays finite deep in the skin-effect regime") {
  const auto cs = two_wire(10e-3, 25e-3, 58e6, 1.0);
  const auto g = assemble_green(cs, HarmonicLayout::uniform(2, 3));
  const CurrentDensityField field(cs, g, 2 * pi * 1e8, kAntiparallel);
  const cplx centre = field.at_polar(0, 0.0, 0.0);
  const cplx edge = field.at_polar(0, 10e-3, 0.0);
  CHECK(std::isfinite(std::abs(centre)));
  CHECK(std::abs(centre) < 1e-100 * std::abs(edge));
}
