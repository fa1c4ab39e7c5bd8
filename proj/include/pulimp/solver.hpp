#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "pulimp/geometry.hpp"
#include "pulimp/green.hpp"
#include "pulimp/surface_admittance.hpp"

namespace pulimp {

/// Per-unit-length partial parameters at one frequency.
struct PulResult {
  double frequency = 0.0;  // Hz
  Eigen::MatrixXd R;       // ohm/m
  Eigen::MatrixXd L;       // H/m
  double condition = 1.0;  // estimate for the N x N system
  std::vector<int> orders;
  std::uint64_t geometry_hash = 0;

  double omega() const;
  Eigen::MatrixXcd impedance() const;  // R + j w L
};

PulResult make_result(double frequency, const Eigen::MatrixXcd& z);

struct SolveSettings {
  int order = 3;             // uniform truncation order
  std::vector<int> orders;   // per conductor; overrides `order` when non-empty
  std::vector<double> frequencies;  // Hz, strictly ascending
  unsigned threads = 1;

  HarmonicLayout layout_for(const CrossSection& cs) const;

  /// Log-spaced grid with round(decades * points_per_decade) + 1 samples,
  /// endpoints included.
  static std::vector<double> log_grid(double f_min, double f_max, double points_per_decade);
};

/// Throws Error(validation) on negative orders, wrong order count, or a
/// frequency list that is not strictly positive and ascending.
void check_settings(const CrossSection& cs, const SolveSettings& settings);

inline constexpr double kConditionWarning = 1e12;

/// Full solution of the moment system at one frequency.
struct MomSolution {
  PulResult pul;
  SurfaceAdmittance ys;
  /// X = (1 - j w mu0 Ys G)^{-1} Ys U, N x P. Column p is the current
  /// coefficient vector produced by a unit partial impedance drive on p.
  Eigen::MatrixXcd response;
};

MomSolution solve_mom(const CrossSection& cs, const GreenMatrix& green, double omega);

/// R + jwL = [U^T (1 - j w mu0 Ys G)^{-1} Ys U]^{-1}, never forming the N x N inverse.
/// Throws Error(solver, "ill-conditioned system ...") instead of returning garbage.
PulResult pul_partial(const CrossSection& cs, const GreenMatrix& green, double omega);

/// One Green assembly shared by every frequency. Results follow the input
/// grid order whatever the thread count.
std::vector<PulResult> sweep(const CrossSection& cs, const SolveSettings& settings);
std::vector<PulResult> sweep(const CrossSection& cs, const SolveSettings& settings, const GreenMatrix& green);

}  // namespace pulimp
