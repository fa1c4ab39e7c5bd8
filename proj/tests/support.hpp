#pragma once

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "pulimp/geometry.hpp"

namespace testing {

// Random non-overlapping conductors with gap ratio d / (a_p + a_q) >= min_gap.
inline pulimp::CrossSection random_cross_section(std::mt19937_64& rng, int count, double min_gap = 1.05,
                                                 bool magnetic = false) {
  std::uniform_real_distribution<double> radius(1e-3, 8e-3);
  std::uniform_real_distribution<double> coord(-60e-3, 60e-3);
  std::uniform_real_distribution<double> log_sigma(6.0, 7.8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  pulimp::CrossSection cs;
  int id = 1;
  while (static_cast<int>(cs.size()) < count) {
    pulimp::Conductor c;
    c.id = id;
    c.radius = radius(rng);
    c.center_x = coord(rng);
    c.center_y = coord(rng);
    c.conductivity = std::pow(10.0, log_sigma(rng));
    c.rel_permeability = (magnetic && unit(rng) < 0.3) ? 50.0 : 1.0;
    bool clear = true;
    for (const auto& o : cs.conductors) {
      if (std::hypot(o.center_x - c.center_x, o.center_y - c.center_y) < min_gap * (o.radius + c.radius)) clear = false;
    }
    if (clear) {
      cs.conductors.push_back(c);
      ++id;
    }
  }
  return cs;
}

inline double rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / std::max(a.norm(), b.norm());
}

inline double rel_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).norm() / std::max(a.norm(), b.norm());
}

}  // namespace testing
