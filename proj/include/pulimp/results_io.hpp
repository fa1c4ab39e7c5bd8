#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pulimp/reduction.hpp"

namespace pulimp {

enum class UnitConvention {
  si,      // R [ohm/m], L [H/m]
  per_km,  // R [ohm/km], X = w L [ohm/km]
};

const char* to_string(UnitConvention units);

/// One impedance matrix per frequency, rows and columns labelled by conductor id.
struct ImpedanceTable {
  std::vector<int> labels;
  std::vector<double> frequencies;
  std::vector<Eigen::MatrixXcd> impedance;  // ohm/m, R + j w L
};

/// Header: f_hz, R_<i>_<j> row-major, then L_<i>_<j> (si) or X_<i>_<j>
/// (per_km). Values are written in shortest round-trip form.
void write_impedance_csv(std::ostream& out, const ImpedanceTable& table, UnitConvention units);

/// Inverse of write_impedance_csv. The unit convention is recovered from the
/// header and the result is returned in ohm/m. Throws Error(parse).
ImpedanceTable read_impedance_csv(std::istream& in);
ImpedanceTable read_impedance_csv(const std::filesystem::path& path);

struct SequenceRow {
  double frequency;
  SequenceImpedance z;  // ohm/m
};

/// f_hz,R_pos,L_pos,R_zero,L_zero (si) or f_hz,R_pos,X_pos,R_zero,X_zero (per_km).
void write_sequence_csv(std::ostream& out, const std::vector<SequenceRow>& rows, UnitConvention units);

/// Shortest round-trip text for a double.
std::string format_double(double value);

/// Writes through a temporary file in the same directory and renames it into
/// place. Throws Error(io).
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace pulimp
