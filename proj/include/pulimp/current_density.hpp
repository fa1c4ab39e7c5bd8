#pragma once

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pulimp/geometry.hpp"
#include "pulimp/green.hpp"
#include "pulimp/solver.hpp"

namespace pulimp {

struct Point {
  double x;
  double y;
};

/// Longitudinal current density inside every conductor for prescribed
/// conductor currents. Boundary field coefficients come from the moment
/// solution; the interior uses the Fourier-Bessel expansion
///   J_z(r, t) = sigma sum_n E_n J_|n|(k r) / J_|n|(k a) e^{j n t}
/// with the Bessel quotient formed from log values.
class CurrentDensityField {
 public:
  CurrentDensityField(const CrossSection& cs, const GreenMatrix& green, double omega, std::span<const cplx> drive);

  /// A/m^2. Throws Error(validation, "exterior point ...") outside every conductor.
  cplx at(Point point) const;
  cplx at_polar(std::size_t conductor, double r, double theta) const;

  const Eigen::VectorXcd& field_coefficients() const { return field_; }
  const Eigen::VectorXcd& current_coefficients() const { return current_; }
  const PulResult& pul() const { return pul_; }

  /// Index of the conductor containing the point, or -1.
  long locate(Point point) const;

 private:
  const CrossSection* cs_;
  HarmonicLayout layout_;
  PulResult pul_;
  Eigen::VectorXcd field_;
  Eigen::VectorXcd current_;
  std::vector<cplx> k_;
  std::vector<std::vector<cplx>> log_j_surface_;  // per conductor, |n| = 0..N_p
};

std::vector<cplx> current_density(const CrossSection& cs, const GreenMatrix& green, double omega,
                                  std::span<const cplx> drive, std::span<const Point> points);

}  // namespace pulimp
