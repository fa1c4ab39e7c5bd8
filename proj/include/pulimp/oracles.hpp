#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "pulimp/geometry.hpp"
#include "pulimp/specfun.hpp"

namespace pulimp {

// Reference computations independent of the moment solver: closed-form
// two-wire results, brute-force quadrature of Green entries, and a filament
// (conductor partitioning) impedance solver.

/// delta = 1 / sqrt(pi f mu sigma).
double skin_depth(double frequency, double conductivity, double permeability = kMu0);

struct TwoWireSpec {
  double radius = 0.0;      // m
  double separation = 0.0;  // center to center, m
  double conductivity = 0.0;
  double rel_permeability = 1.0;
  double frequency = 0.0;  // Hz
};

struct LoopRL {
  double resistance;  // ohm/m
  double inductance;  // H/m
};

/// Fully developed skin effect with exact proximity factor:
/// R = (R_s / pi a) x / sqrt(x^2 - 1), L_ext = (mu0/pi) acosh(x), x = D / 2a.
LoopRL two_wire_hf(const TwoWireSpec& spec);

/// Internal impedance of an isolated round wire from Kelvin functions.
cplx wire_internal_impedance(double radius, double conductivity, double frequency, double rel_permeability = 1.0);

/// 2 Z_int + j w L_ext: skin effect exact, proximity neglected.
cplx two_wire_wide(const TwoWireSpec& spec);

/// Nested periodic trapezoid rule (points per angle) for the Green entry
/// G^(p,q)_{row,col} of two separated conductors.
cplx green_quadrature(const Conductor& p, const Conductor& q, int row_harmonic, int col_harmonic, int points);

struct FilamentLimits {
  double max_frequency = 20e3;      // Hz
  std::size_t max_filaments = 10000;
};

/// Partitions every conductor into `rings` annular rings of near-square
/// filaments, solves the filament impedance network with each conductor's
/// filaments in parallel, and returns loop impedances with conductor `ref`
/// (default: last) as return path. Throws Error(solver, "frequency too high
/// for mesh") when a filament is wider than half a skin depth.
Eigen::MatrixXcd filament_solve(const CrossSection& cs, double omega, int rings, long ref = -1,
                                const FilamentLimits& limits = {});

/// Partial (reference-free) conductor impedance matrix from the same model.
Eigen::MatrixXcd filament_partial(const CrossSection& cs, double omega, int rings, const FilamentLimits& limits = {});

std::size_t filament_count(const CrossSection& cs, int rings);

}  // namespace pulimp
