#include "pulimp/oracles.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "pulimp/errors.hpp"
#include "pulimp/reduction.hpp"

namespace pulimp {

namespace {

using std::numbers::pi;

void check_two_wire(const TwoWireSpec& s) {
  if (!(s.radius > 0.0) || !(s.separation > 2.0 * s.radius)) {
    throw std::invalid_argument("two-wire line needs D > 2a > 0");
  }
  if (!(s.frequency > 0.0) || !(s.conductivity > 0.0)) {
    throw std::invalid_argument("two-wire line needs positive frequency and conductivity");
  }
}

struct Filament {
  double x;
  double y;
  double area;
  double gmd;  // self geometric mean distance
  std::size_t owner;
};

int sectors(int ring, double h) {
  if (ring == 0) return 1;
  const double r_mid = (ring + 0.5) * h;
  return std::max(3, static_cast<int>(std::lround(2.0 * pi * r_mid / h)));
}

std::vector<Filament> mesh(const CrossSection& cs, int rings) {
  std::vector<Filament> out;
  for (std::size_t p = 0; p < cs.size(); ++p) {
    const auto& c = cs[p];
    const double h = c.radius / rings;
    for (int i = 0; i < rings; ++i) {
      const int m = sectors(i, h);
      const double r_in = i * h;
      const double r_out = (i + 1) * h;
      const double span = 2.0 * pi / m;
      const double area = 0.5 * span * (r_out * r_out - r_in * r_in);
      // Sector centroid radius.
      const double rc = i == 0 ? 0.0
                               : (2.0 / 3.0) * (r_out * r_out * r_out - r_in * r_in * r_in) /
                                     (r_out * r_out - r_in * r_in) * std::sin(0.5 * span) / (0.5 * span);
      const double gmd = std::exp(-0.25) * std::sqrt(area / pi);
      for (int s = 0; s < m; ++s) {
        const double t = (s + 0.5) * span;
        out.push_back({c.center_x + rc * std::cos(t), c.center_y + rc * std::sin(t), area, gmd, p});
      }
    }
  }
  return out;
}

}  // namespace

double skin_depth(double frequency, double conductivity, double permeability) {
  return 1.0 / std::sqrt(pi * frequency * permeability * conductivity);
}

LoopRL two_wire_hf(const TwoWireSpec& s) {
  check_two_wire(s);
  const double delta = skin_depth(s.frequency, s.conductivity, s.rel_permeability * kMu0);
  const double rs = 1.0 / (s.conductivity * delta);
  const double x = s.separation / (2.0 * s.radius);
  return {rs / (pi * s.radius) * x / std::sqrt(x * x - 1.0), kMu0 / pi * std::acosh(x)};
}

cplx wire_internal_impedance(double radius, double conductivity, double frequency, double rel_permeability) {
  const double delta = skin_depth(frequency, conductivity, rel_permeability * kMu0);
  const double xi = std::sqrt(2.0) * radius / delta;
  const double scale = 1.0 / (std::sqrt(2.0) * pi * radius * conductivity * delta);
  if (xi > 500.0) {
    // ber, bei overflow; (ber + j bei) / (bei' - j ber') = j e^{-j3pi/4} / (J0'/J0) at xi e^{j3pi/4}
    const cplx turn = std::polar(1.0, 0.75 * pi);
    return scale * cplx(0.0, 1.0) / (turn * bessel_j_ratio(0, xi * turn));
  }
  const auto k = kelvin(xi);
  return scale * cplx(k.ber, k.bei) / cplx(k.dbei, -k.dber);
}

cplx two_wire_wide(const TwoWireSpec& s) {
  check_two_wire(s);
  const double omega = 2.0 * pi * s.frequency;
  const double l_ext = kMu0 / pi * std::acosh(s.separation / (2.0 * s.radius));
  return 2.0 * wire_internal_impedance(s.radius, s.conductivity, s.frequency, s.rel_permeability) +
         cplx(0.0, omega * l_ext);
}

cplx green_quadrature(const Conductor& p, const Conductor& q, int row_harmonic, int col_harmonic, int points) {
  if (points < 64) throw std::invalid_argument("green_quadrature: need at least 64 points per angle");
  const double step = 2.0 * pi / points;
  std::vector<cplx> col_phase(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) col_phase[static_cast<std::size_t>(k)] = std::polar(1.0, col_harmonic * k * step);

  cplx total = 0.0;
  for (int i = 0; i < points; ++i) {
    const double t = i * step;
    const double xp = p.center_x + p.radius * std::cos(t);
    const double yp = p.center_y + p.radius * std::sin(t);
    cplx inner = 0.0;
    for (int k = 0; k < points; ++k) {
      const double tq = k * step;
      const double dx = xp - (q.center_x + q.radius * std::cos(tq));
      const double dy = yp - (q.center_y + q.radius * std::sin(tq));
      inner += 0.5 * std::log(dx * dx + dy * dy) * col_phase[static_cast<std::size_t>(k)];
    }
    total += inner * std::polar(1.0, -row_harmonic * t);
  }
  return total / (2.0 * pi * static_cast<double>(points) * points);
}

std::size_t filament_count(const CrossSection& cs, int rings) {
  std::size_t total = 0;
  for (std::size_t p = 0; p < cs.size(); ++p) {
    const double h = cs[p].radius / rings;
    for (int i = 0; i < rings; ++i) total += static_cast<std::size_t>(sectors(i, h));
  }
  return total;
}

Eigen::MatrixXcd filament_partial(const CrossSection& cs, double omega, int rings, const FilamentLimits& limits) {
  if (rings < 1) throw std::invalid_argument("filament_solve: need at least one ring");
  const double f = omega / (2.0 * pi);
  if (!(omega > 0.0)) throw Error(ErrorKind::validation, "frequency must be positive");
  if (f > limits.max_frequency) {
    std::ostringstream os;
    os << "frequency too high for mesh: " << f << " Hz exceeds the filament oracle limit of " << limits.max_frequency
       << " Hz";
    throw Error(ErrorKind::solver, os.str());
  }
  for (const auto& c : cs.conductors) {
    if (c.rel_permeability != 1.0) throw Error(ErrorKind::validation, "filament oracle supports non-magnetic conductors only");
    if (!(c.conductivity > 0.0)) throw Error(ErrorKind::validation, "filament oracle needs positive conductivity");
    const double h = c.radius / rings;
    if (h > 0.5 * skin_depth(f, c.conductivity)) {
      std::ostringstream os;
      os << "frequency too high for mesh: filament size " << h << " m on conductor " << c.id
         << " exceeds half a skin depth";
      throw Error(ErrorKind::solver, os.str());
    }
  }
  if (filament_count(cs, rings) > limits.max_filaments) {
    throw Error(ErrorKind::solver, "filament mesh too large: " + std::to_string(filament_count(cs, rings)) + " filaments");
  }

  const auto fils = mesh(cs, rings);
  const auto n = static_cast<Eigen::Index>(fils.size());
  const auto p_count = static_cast<Eigen::Index>(cs.size());
  const cplx jw = cplx(0.0, omega * kMu0 / (2.0 * pi));

  Eigen::MatrixXcd z(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& a = fils[static_cast<std::size_t>(i)];
    z(i, i) = 1.0 / (cs[a.owner].conductivity * a.area) - jw * std::log(a.gmd);
    for (Eigen::Index k = i + 1; k < n; ++k) {
      const auto& b = fils[static_cast<std::size_t>(k)];
      z(i, k) = z(k, i) = -jw * std::log(std::hypot(a.x - b.x, a.y - b.y));
    }
  }

  // Filaments of one conductor share its voltage drop: Y_c = B^T Z^{-1} B.
  Eigen::MatrixXcd bundle = Eigen::MatrixXcd::Zero(n, p_count);
  for (Eigen::Index i = 0; i < n; ++i) bundle(i, static_cast<Eigen::Index>(fils[static_cast<std::size_t>(i)].owner)) = 1.0;
  const Eigen::MatrixXcd x = z.partialPivLu().solve(bundle);
  const Eigen::MatrixXcd y = bundle.transpose() * x;
  return y.inverse();
}

Eigen::MatrixXcd filament_solve(const CrossSection& cs, double omega, int rings, long ref, const FilamentLimits& limits) {
  const auto partial = filament_partial(cs, omega, rings, limits);
  const auto r = ref < 0 ? static_cast<std::size_t>(cs.size() - 1) : static_cast<std::size_t>(ref);
  return reference_reduce(partial, r);
}

}  // namespace pulimp
