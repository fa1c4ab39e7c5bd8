#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>

#include <Eigen/Dense>

#include "pulimp/geometry.hpp"
#include "pulimp/specfun.hpp"

namespace pulimp {

/// Galerkin projection of the 2-D kernel (1/2pi) ln|r - r'| onto the Fourier
/// bases of every conductor boundary. Frequency independent; lengths inside
/// the logarithms are in meters.
struct GreenMatrix {
  GreenMatrix(Eigen::MatrixXcd data, HarmonicLayout layout, std::uint64_t key)
      : data(std::move(data)), layout(std::move(layout)), key(key) {}

  Eigen::MatrixXcd data;
  HarmonicLayout layout;
  std::uint64_t key;  // geometry_hash combined with the layout hash
};

/// Block G^(p,p): ln(a)/2pi at (0,0), -1/(4 pi |n|) on the remaining diagonal.
/// Rows and columns run n = -order..order.
Eigen::MatrixXcd green_self_block(double radius, int order);

/// Closed-form G^(p,q)_{row,col} for two distinct, separated conductors.
cplx green_mutual_entry(const Conductor& p, const Conductor& q, int row_harmonic, int col_harmonic);

GreenMatrix assemble_green(const CrossSection& cs, const HarmonicLayout& layout);

/// Number of assemble_green calls made by this process.
std::size_t green_assembly_count();

std::uint64_t green_key(const CrossSection& cs, const HarmonicLayout& layout);

/// Binary cache: 8-byte magic "PULIMPG1", u32 version, u32 reserved,
/// u64 N, u64 key, then N*N (re, im) doubles row-major, little-endian.
/// The write goes to a temporary file which is then renamed into place.
void write_green_cache(const std::filesystem::path& path, const GreenMatrix& green);

/// Returns nullopt when the file is absent or was built for another key/size.
std::optional<GreenMatrix> read_green_cache(const std::filesystem::path& path, const HarmonicLayout& layout,
                                            std::uint64_t key);

}  // namespace pulimp
