#include "pulimp/green.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <unistd.h>

#include "pulimp/errors.hpp"

namespace pulimp {

namespace {

using std::numbers::pi;

static_assert(std::endian::native == std::endian::little, "green cache I/O assumes a little-endian host");

std::atomic<std::size_t> g_assemblies{0};

constexpr char kMagic[8] = {'P', 'U', 'L', 'I', 'M', 'P', 'G', '1'};
constexpr std::uint32_t kVersion = 1;

// G^(p,q)_{m,0}, m >= 1: -(1/(4 pi m)) (a_p/d)^m (-(x_pq - j y_pq)/d)^m.
cplx mutual_col_zero(double a_p, double x, double y, double d, int m) {
  const double mag = std::exp(m * std::log(a_p / d)) / (4.0 * pi * m);
  const double phase = std::atan2(y, -x);
  return -std::polar(mag, m * phase);
}

// G^(p,q)_{-m,n}, n >= 1, m >= 0, from the residue at z = -(x_pq - j y_pq):
//   -a_q^n (-a_p)^m C(n+m-1, m) / (4 pi n (x_pq - j y_pq)^{n+m}),
// evaluated in log space.
cplx mutual_residue(double a_p, double a_q, double x, double y, double d, int n, int m) {
  const double log_binom = std::lgamma(n + m) - std::lgamma(m + 1.0) - std::lgamma(static_cast<double>(n));
  const double log_mag = n * std::log(a_q) + m * std::log(a_p) + log_binom - (n + m) * std::log(d) -
                         std::log(4.0 * pi * n);
  const double sign = (m % 2 == 0) ? -1.0 : 1.0;
  const double arg_w = std::atan2(-y, x);
  return sign * std::polar(std::exp(log_mag), -(n + m) * arg_w);
}

}  // namespace

Eigen::MatrixXcd green_self_block(double radius, int order) {
  if (!(radius > 0.0)) throw std::invalid_argument("green_self_block: radius must be positive");
  const int size = 2 * order + 1;
  Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(size, size);
  for (int n = -order; n <= order; ++n) {
    const int i = n + order;
    block(i, i) = n == 0 ? cplx(std::log(radius) / (2.0 * pi)) : cplx(-1.0 / (4.0 * pi * std::abs(n)));
  }
  return block;
}

cplx green_mutual_entry(const Conductor& p, const Conductor& q, int row_harmonic, int col_harmonic) {
  const double x = p.center_x - q.center_x;
  const double y = p.center_y - q.center_y;
  const double d = std::hypot(x, y);
  const int nr = row_harmonic;
  const int nc = col_harmonic;

  if (nc < 0) return std::conj(green_mutual_entry(p, q, -nr, -nc));
  if (nc == 0) {
    if (nr == 0) return std::log(d) / (2.0 * pi);
    if (nr < 0) return std::conj(mutual_col_zero(p.radius, x, y, d, -nr));
    return mutual_col_zero(p.radius, x, y, d, nr);
  }
  if (nr >= 1) return 0.0;
  return mutual_residue(p.radius, q.radius, x, y, d, nc, -nr);
}

GreenMatrix assemble_green(const CrossSection& cs, const HarmonicLayout& layout) {
  if (layout.conductors() != cs.size()) throw std::invalid_argument("assemble_green: layout does not match cross-section");
  ++g_assemblies;
  const auto n = static_cast<Eigen::Index>(layout.size());
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(n, n);

  for (std::size_t p = 0; p < cs.size(); ++p) {
    const auto row0 = static_cast<Eigen::Index>(layout.offset(p));
    const int np = layout.order(p);
    for (std::size_t q = 0; q < cs.size(); ++q) {
      const auto col0 = static_cast<Eigen::Index>(layout.offset(q));
      const int nq = layout.order(q);
      if (p == q) {
        g.block(row0, col0, 2 * np + 1, 2 * nq + 1) = green_self_block(cs[p].radius, np);
        continue;
      }
      for (int nc = -nq; nc <= nq; ++nc) {
        for (int nr = -np; nr <= np; ++nr) {
          g(row0 + nr + np, col0 + nc + nq) = green_mutual_entry(cs[p], cs[q], nr, nc);
        }
      }
    }
  }
  return GreenMatrix(std::move(g), layout, green_key(cs, layout));
}

std::size_t green_assembly_count() { return g_assemblies.load(); }

std::uint64_t green_key(const CrossSection& cs, const HarmonicLayout& layout) {
  const std::uint64_t a = geometry_hash(cs);
  const std::uint64_t b = layout.hash();
  return a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
}

void write_green_cache(const std::filesystem::path& path, const GreenMatrix& green) {
  const auto tmp = path.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot write green cache " + tmp);
    const std::uint32_t reserved = 0;
    const auto n = static_cast<std::uint64_t>(green.data.rows());
    out.write(kMagic, sizeof kMagic);
    out.write(reinterpret_cast<const char*>(&kVersion), sizeof kVersion);
    out.write(reinterpret_cast<const char*>(&reserved), sizeof reserved);
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    out.write(reinterpret_cast<const char*>(&green.key), sizeof green.key);
    std::vector<double> row(2 * n);
    for (Eigen::Index i = 0; i < green.data.rows(); ++i) {
      for (Eigen::Index j = 0; j < green.data.cols(); ++j) {
        row[2 * j] = green.data(i, j).real();
        row[2 * j + 1] = green.data(i, j).imag();
      }
      out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(double)));
    }
    if (!out) throw Error(ErrorKind::io, "short write to green cache " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorKind::io, "cannot move green cache into place: " + ec.message());
  }
}

std::optional<GreenMatrix> read_green_cache(const std::filesystem::path& path, const HarmonicLayout& layout,
                                            std::uint64_t key) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[8];
  std::uint32_t version = 0;
  std::uint32_t reserved = 0;
  std::uint64_t n = 0;
  std::uint64_t stored_key = 0;
  in.read(magic, sizeof magic);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&reserved), sizeof reserved);
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  in.read(reinterpret_cast<char*>(&stored_key), sizeof stored_key);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw Error(ErrorKind::io, "not a green cache file: " + path.string());
  }
  if (version != kVersion || n != layout.size() || stored_key != key) return std::nullopt;

  const auto size = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd data(size, size);
  std::vector<double> row(2 * n);
  for (Eigen::Index i = 0; i < size; ++i) {
    in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(double)));
    if (!in) throw Error(ErrorKind::io, "truncated green cache " + path.string());
    for (Eigen::Index j = 0; j < size; ++j) data(i, j) = cplx(row[2 * j], row[2 * j + 1]);
  }
  return GreenMatrix(std::move(data), layout, key);
}

}  // namespace pulimp
