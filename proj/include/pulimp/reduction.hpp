#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "pulimp/specfun.hpp"

namespace pulimp {

/// Loop impedances with conductor `ref` as voltage reference and current
/// return: Z~_pq = Z_pq - Z_p,ref - Z_ref,q + Z_ref,ref over the remaining
/// indices, kept in their original order. The additive gauge constant of the
/// logarithmic kernel cancels.
Eigen::MatrixXcd reference_reduce(const Eigen::MatrixXcd& z, std::size_t ref);

/// Schur complement Z_kk - Z_kg Z_gg^{-1} Z_gk eliminating the `grounded`
/// indices (zero voltage drop) from the given matrix, kept indices in order.
/// Throws Error(solver, "grounded subsystem singular") if Z_gg is singular.
Eigen::MatrixXcd kron_reduce(const Eigen::MatrixXcd& z, const std::vector<std::size_t>& grounded);

/// Grounded-conductor elimination on loop impedances: the first grounded
/// conductor becomes the reference, the remaining grounded ones are Kron
/// eliminated. All return current flows in the grounded set, so the result
/// does not depend on the logarithmic gauge. Empty set: input unchanged.
Eigen::MatrixXcd grounded_reduce(const Eigen::MatrixXcd& z, const std::vector<std::size_t>& grounded);

struct SequenceImpedance {
  cplx positive;
  cplx zero;
};

/// Balanced-matrix symmetric components: with s the mean diagonal and m the
/// mean off-diagonal entry, Z+ = s - m and Z0 = s + 2m.
SequenceImpedance sequence_impedances(const Eigen::Matrix3cd& z);

}  // namespace pulimp
