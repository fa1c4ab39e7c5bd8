#include "pulimp/current_density.hpp"

#include <cmath>
#include <sstream>

#include "pulimp/errors.hpp"
#include "pulimp/surface_admittance.hpp"

namespace pulimp {

CurrentDensityField::CurrentDensityField(const CrossSection& cs, const GreenMatrix& green, double omega,
                                         std::span<const cplx> drive)
    : cs_(&cs), layout_(green.layout) {
  if (drive.size() != cs.size()) {
    throw Error(ErrorKind::validation, "drive vector needs one current per conductor");
  }
  auto sol = solve_mom(cs, green, omega);
  pul_ = sol.pul;

  Eigen::VectorXcd currents(static_cast<Eigen::Index>(drive.size()));
  for (std::size_t p = 0; p < drive.size(); ++p) currents(static_cast<Eigen::Index>(p)) = drive[p];
  // J = X (R + jwL) I, E = Ys^{-1} J.
  current_ = sol.response * (pul_.impedance() * currents);
  field_.resize(current_.size());
  for (Eigen::Index i = 0; i < current_.size(); ++i) {
    const cplx y = sol.ys.diagonal[static_cast<std::size_t>(i)];
    field_(i) = y == cplx(0.0) ? cplx(0.0) : current_(i) / y;
  }

  k_.resize(cs.size());
  log_j_surface_.resize(cs.size());
  for (std::size_t p = 0; p < cs.size(); ++p) {
    k_[p] = wavenumbers(cs[p], cs.outer_permittivity, omega).inner;
    for (int n = 0; n <= layout_.order(p); ++n) {
      log_j_surface_[p].push_back(log_bessel_j(n, k_[p] * cs[p].radius));
    }
  }
}

long CurrentDensityField::locate(Point point) const {
  for (std::size_t p = 0; p < cs_->size(); ++p) {
    const auto& c = (*cs_)[p];
    if (std::hypot(point.x - c.center_x, point.y - c.center_y) <= c.radius * (1.0 + 1e-12)) {
      return static_cast<long>(p);
    }
  }
  return -1;
}

cplx CurrentDensityField::at(Point point) const {
  const long p = locate(point);
  if (p < 0) {
    std::ostringstream os;
    os << "exterior point (" << point.x << ", " << point.y << ") lies outside every conductor";
    throw Error(ErrorKind::validation, os.str());
  }
  const auto& c = (*cs_)[static_cast<std::size_t>(p)];
  const double dx = point.x - c.center_x;
  const double dy = point.y - c.center_y;
  return at_polar(static_cast<std::size_t>(p), std::min(std::hypot(dx, dy), c.radius), std::atan2(dy, dx));
}

cplx CurrentDensityField::at_polar(std::size_t p, double r, double theta) const {
  const auto& c = (*cs_)[p];
  const int order = layout_.order(p);
  const cplx kr = k_[p] * r;
  cplx sum = 0.0;
  for (int m = 0; m <= order; ++m) {
    cplx quotient;
    if (r == 0.0) {
      quotient = m == 0 ? std::exp(-log_j_surface_[p][0]) : cplx(0.0);
    } else {
      quotient = std::exp(log_bessel_j(m, kr) - log_j_surface_[p][static_cast<std::size_t>(m)]);
    }
    if (m == 0) {
      sum += field_(static_cast<Eigen::Index>(layout_.index(p, 0))) * quotient;
    } else {
      const cplx plus = field_(static_cast<Eigen::Index>(layout_.index(p, m))) * std::polar(1.0, m * theta);
      const cplx minus = field_(static_cast<Eigen::Index>(layout_.index(p, -m))) * std::polar(1.0, -m * theta);
      sum += (plus + minus) * quotient;
    }
  }
  return c.conductivity * sum;
}

std::vector<cplx> current_density(const CrossSection& cs, const GreenMatrix& green, double omega,
                                  std::span<const cplx> drive, std::span<const Point> points) {
  const CurrentDensityField field(cs, green, omega, drive);
  std::vector<cplx> out;
  out.reserve(points.size());
  for (const auto& pt : points) out.push_back(field.at(pt));
  return out;
}

}  // namespace pulimp
