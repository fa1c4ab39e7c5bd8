#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "doctest.h"
#include "pulimp/errors.hpp"
#include "pulimp/green.hpp"
#include "pulimp/oracles.hpp"
#include "support.hpp"

using namespace pulimp;
using std::numbers::pi;

namespace {

// Trapezoid points for ~1e-12 on the slowest-converging boundary series.
int quadrature_points(const Conductor& p, const Conductor& q) {
  const double d = std::hypot(p.center_x - q.center_x, p.center_y - q.center_y);
  const double rho = std::max(p.radius / (d - q.radius), q.radius / (d - p.radius));
  const double needed = 30.0 / -std::log(rho);
  int m = 256;
  while (m < needed && m < 8192) m *= 2;
  return m;
}

Conductor wire(double x, double y, double r) {
  Conductor c;
  c.center_x = x;
  c.center_y = y;
  c.radius = r;
  c.conductivity = 1.0;
  return c;
}

// Which closed-form branch an index pair falls in.
int case_of(int row, int col) {
  if (col == 0) return row == 0 ? 0 : 1;
  if (col > 0) return row >= 1 ? 2 : 3;
  return 4;
}

}  // namespace

TEST_CASE("self block") {
  const auto unit = green_self_block(1.0, 3);
  REQUIRE(unit.rows() == 7);
  CHECK(unit(3, 3) == cplx(0.0));
  const double a = 7e-3;
  const auto b = green_self_block(a, 3);
  for (int row = -3; row <= 3; ++row) {
    for (int col = -3; col <= 3; ++col) {
      const cplx v = b(row + 3, col + 3);
      if (row != col) {
        CHECK(v == cplx(0.0));
      } else if (row == 0) {
        CHECK(v == cplx(std::log(a) / (2 * pi)));
      } else {
        CHECK(v == cplx(-1.0 / (4 * pi * std::abs(row))));
      }
    }
  }
  CHECK(b(5, 5).real() == doctest::Approx(-1.0 / (8 * pi)).epsilon(1e-15));
}

TEST_CASE("mutual entries: closed-form examples") {
  const auto p = wire(0.0, 0.0, 10e-3);
  const auto q = wire(0.1, 0.0, 10e-3);
  CHECK(green_mutual_entry(p, q, 0, 0).real() == doctest::Approx(-0.36647).epsilon(1e-4));
  CHECK(std::abs(green_mutual_entry(p, q, 0, 0) - std::log(0.1) / (2 * pi)) <= 1e-15);
  CHECK(green_mutual_entry(p, q, 1, 2) == cplx(0.0));
  CHECK(std::abs(green_quadrature(p, q, 0, 0, 512) - std::log(0.1) / (2 * pi)) <= 1e-10);
  CHECK(std::abs(green_quadrature(p, q, 1, 2, 512)) <= 1e-10);

  const auto near = wire(0.025, 0.0, 10e-3);
  const cplx analytic = green_mutual_entry(p, near, 0, 1);
  CHECK(std::abs(analytic - green_quadrature(p, near, 0, 1, 1024)) <= 1e-8);
}

TEST_CASE("mutual entries match the quadrature oracle on random pairs") {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> radius(0.5e-3, 20e-3);
  std::uniform_real_distribution<double> log_gap(std::log(1.01), std::log(50.0));
  std::uniform_real_distribution<double> angle(-pi, pi);
  std::uniform_real_distribution<double> shift(-0.2, 0.2);
  std::uniform_int_distribution<int> harmonic(-4, 4);
  std::array<int, 5> per_case{};
  double worst = 0.0;
  for (int sample = 0; sample < 300; ++sample) {
    const double ap = radius(rng);
    const double aq = radius(rng);
    const double d = (ap + aq) * std::exp(log_gap(rng));
    const double phi = angle(rng);
    const auto p = wire(shift(rng), shift(rng), ap);
    const auto q = wire(p.center_x + d * std::cos(phi), p.center_y + d * std::sin(phi), aq);
    // cycle through the closed-form branches
    int row = harmonic(rng);
    int col = harmonic(rng);
    const int up = std::min(std::abs(col) + 1, 4);
    switch (sample % 5) {
      case 0: row = col = 0; break;
      case 1: col = 0; row = row == 0 ? 2 : row; break;
      case 2: col = up; row = std::min(std::abs(row) + 1, 4); break;
      case 3: col = up; row = -std::abs(row); break;
      default: col = -up; break;
    }
    ++per_case[static_cast<std::size_t>(case_of(row, col))];
    const cplx exact = green_mutual_entry(p, q, row, col);
    const cplx numeric = green_quadrature(p, q, row, col, quadrature_points(p, q));
    CAPTURE(row);
    CAPTURE(col);
    CAPTURE(d / (ap + aq));
    CHECK(std::abs(exact - numeric) <= 1e-8);
    worst = std::max(worst, std::abs(exact - numeric));
  }
  for (int n : per_case) CHECK(n == 60);
  MESSAGE("max abs deviation " << worst);
}

TEST_CASE("assembled matrix structure") {
  CrossSection one;
  one.conductors.push_back(wire(0.01, -0.02, 10e-3));
  const auto g1 = assemble_green(one, HarmonicLayout::uniform(1, 3));
  CHECK(g1.data == green_self_block(10e-3, 3));

  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const auto cs = testing::random_cross_section(rng, 4);
    std::vector<int> orders;
    for (int p = 0; p < 4; ++p) orders.push_back(static_cast<int>(rng() % 5));
    const HarmonicLayout layout(orders);
    const auto g = assemble_green(cs, layout);
    for (std::size_t p = 0; p < cs.size(); ++p) {
      for (std::size_t q = 0; q < cs.size(); ++q) {
        for (int row = -orders[p]; row <= orders[p]; ++row) {
          for (int col = -orders[q]; col <= orders[q]; ++col) {
            const cplx v = g.data(static_cast<Eigen::Index>(layout.index(p, row)), static_cast<Eigen::Index>(layout.index(q, col)));
            const cplx mirror =
                g.data(static_cast<Eigen::Index>(layout.index(p, -row)), static_cast<Eigen::Index>(layout.index(q, -col)));
            CHECK(v == std::conj(mirror));
            if (p != q && col > 0 && row >= 1) CHECK(v == cplx(0.0));
            if (p != q) CHECK(v == green_mutual_entry(cs[p], cs[q], row, col));
          }
        }
      }
    }
  }
}

TEST_CASE("cable matrix entries match the quadrature oracle") {
  const auto cs = three_phase_armored_cable();
  const auto layout = HarmonicLayout::uniform(cs.size(), 3);
  const auto g = assemble_green(cs, layout);
  REQUIRE(g.data.rows() == 239 * 7);
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> pick(0, layout.size() - 1);
  int checked = 0;
  while (checked < 40) {
    const auto [p, row] = layout.locate(pick(rng));
    // bias towards neighbours so close pairs are exercised
    const std::size_t q = checked % 2 == 0 ? (p + 1) % cs.size() : pick(rng) % cs.size();
    if (p == q) continue;
    const int col = static_cast<int>(rng() % 7) - 3;
    const cplx v = g.data(static_cast<Eigen::Index>(layout.index(p, row)), static_cast<Eigen::Index>(layout.index(q, col)));
    CHECK(std::abs(v - green_quadrature(cs[p], cs[q], row, col, quadrature_points(cs[p], cs[q]))) <= 1e-8);
    ++checked;
  }
}

TEST_CASE("assembly counter and cache") {
  const auto cs = two_wire(10e-3, 100e-3, 58e6, 1.0);
  const auto layout = HarmonicLayout::uniform(2, 3);
  const auto before = green_assembly_count();
  const auto g = assemble_green(cs, layout);
  CHECK(green_assembly_count() == before + 1);
  CHECK(g.data.rows() == 14);
  CHECK(g.key == green_key(cs, layout));
  CHECK(green_key(cs, layout) != green_key(cs, HarmonicLayout::uniform(2, 2)));

  const auto dir = std::filesystem::temp_directory_path() / "pulimp_green_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "g.bin";
  std::filesystem::remove(path);
  CHECK_FALSE(read_green_cache(path, layout, g.key).has_value());
  write_green_cache(path, g);
  CHECK(std::filesystem::file_size(path) == 32 + 14 * 14 * 16);
  const auto back = read_green_cache(path, layout, g.key);
  REQUIRE(back.has_value());
  CHECK(back->data == g.data);
  CHECK(back->key == g.key);
  CHECK_FALSE(read_green_cache(path, layout, g.key ^ 1u).has_value());
  CHECK_FALSE(read_green_cache(path, HarmonicLayout::uniform(2, 2), g.key).has_value());
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.write("XXXX", 4);
  }
  try {
    read_green_cache(path, layout, g.key);
    FAIL("corrupt cache accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io);
  }
  std::filesystem::remove_all(dir);
}
