#include "pulimp/reduction.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "pulimp/errors.hpp"

namespace pulimp {

namespace {

std::vector<Eigen::Index> complement(Eigen::Index size, const std::vector<std::size_t>& removed) {
  std::vector<bool> drop(static_cast<std::size_t>(size), false);
  for (auto i : removed) {
    if (i >= drop.size()) throw std::out_of_range("conductor index out of range");
    drop[i] = true;
  }
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < size; ++i) {
    if (!drop[static_cast<std::size_t>(i)]) kept.push_back(i);
  }
  return kept;
}

Eigen::MatrixXcd pick(const Eigen::MatrixXcd& z, const std::vector<Eigen::Index>& rows, const std::vector<Eigen::Index>& cols) {
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = z(rows[i], cols[j]);
  }
  return out;
}

}  // namespace

Eigen::MatrixXcd reference_reduce(const Eigen::MatrixXcd& z, std::size_t ref) {
  if (z.rows() != z.cols()) throw std::invalid_argument("reference_reduce: matrix must be square");
  if (z.rows() < 2) throw std::invalid_argument("reference_reduce: need at least two conductors");
  const auto r = static_cast<Eigen::Index>(ref);
  if (r >= z.rows()) throw std::out_of_range("reference_reduce: reference index out of range");
  const auto kept = complement(z.rows(), {ref});
  Eigen::MatrixXcd out(z.rows() - 1, z.cols() - 1);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    for (std::size_t j = 0; j < kept.size(); ++j) {
      const auto p = kept[i];
      const auto q = kept[j];
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = z(p, q) - z(p, r) - z(r, q) + z(r, r);
    }
  }
  return out;
}

Eigen::MatrixXcd kron_reduce(const Eigen::MatrixXcd& z, const std::vector<std::size_t>& grounded) {
  if (z.rows() != z.cols()) throw std::invalid_argument("kron_reduce: matrix must be square");
  if (grounded.empty()) return z;
  std::vector<std::size_t> g = grounded;
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  const auto kept = complement(z.rows(), g);
  if (kept.empty()) throw std::invalid_argument("kron_reduce: at least one conductor must be kept");
  const std::vector<Eigen::Index> gi(g.begin(), g.end());

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(pick(z, gi, gi));
  if (!(lu.rcond() > std::numeric_limits<double>::epsilon())) {
    throw Error(ErrorKind::solver, "grounded subsystem singular");
  }
  return pick(z, kept, kept) - pick(z, kept, gi) * lu.solve(pick(z, gi, kept));
}

Eigen::MatrixXcd grounded_reduce(const Eigen::MatrixXcd& z, const std::vector<std::size_t>& grounded) {
  if (grounded.empty()) return z;
  std::vector<std::size_t> g = grounded;
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  const std::size_t ref = g.front();
  const Eigen::MatrixXcd loop = reference_reduce(z, ref);
  // Indices above the reference shift down by one in the loop matrix.
  std::vector<std::size_t> rest;
  for (std::size_t k = 1; k < g.size(); ++k) rest.push_back(g[k] - 1);
  return kron_reduce(loop, rest);
}

SequenceImpedance sequence_impedances(const Eigen::Matrix3cd& z) {
  const cplx s = z.diagonal().sum() / 3.0;
  const cplx m = (z.sum() - z.diagonal().sum()) / 6.0;
  return {s - m, s + 2.0 * m};
}

}  // namespace pulimp
