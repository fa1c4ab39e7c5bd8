#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "pulimp/geometry.hpp"

namespace pulimp {

enum class LengthUnit { millimeter, meter };

/// Parses a cross-section JSON document:
///   {"units": "mm"|"m", "outer_rel_permittivity": 1.0,
///    "conductors": [{"id", "x", "y", "radius", "sigma", "mu_r", "eps_r",
///                    "role", "connection"}, ...]}
/// Lengths are converted to meters. Throws Error(parse) naming the line or
/// the offending field.
CrossSection parse_cross_section(std::string_view text);
CrossSection read_cross_section(const std::filesystem::path& path);

std::string to_json(const CrossSection& cs, LengthUnit unit = LengthUnit::millimeter);
void write_cross_section(const std::filesystem::path& path, const CrossSection& cs,
                         LengthUnit unit = LengthUnit::millimeter);

}  // namespace pulimp
