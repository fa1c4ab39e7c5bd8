#include "pulimp/results_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "pulimp/errors.hpp"

namespace pulimp {

namespace {

constexpr double kPerKm = 1000.0;

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& cell, std::size_t line) {
  double value = 0.0;
  const char* first = cell.data();
  const char* last = first + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorKind::parse, "line " + std::to_string(line) + ": '" + cell + "' is not a number");
  }
  return value;
}

// "R_3_17" -> (3, 17)
std::pair<int, int> parse_label(const std::string& name, std::size_t column) {
  const auto a = name.find('_');
  const auto b = name.find('_', a + 1);
  if (a != 1 || b == std::string::npos) {
    throw Error(ErrorKind::parse, "line 1: column " + std::to_string(column + 1) + " header '" + name + "'");
  }
  try {
    return {std::stoi(name.substr(a + 1, b - a - 1)), std::stoi(name.substr(b + 1))};
  } catch (const std::exception&) {
    throw Error(ErrorKind::parse, "line 1: column " + std::to_string(column + 1) + " header '" + name + "'");
  }
}

}  // namespace

const char* to_string(UnitConvention units) { return units == UnitConvention::si ? "si" : "per-km"; }

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

void write_impedance_csv(std::ostream& out, const ImpedanceTable& table, UnitConvention units) {
  const bool km = units == UnitConvention::per_km;
  out << "f_hz";
  for (char part : {'R', km ? 'X' : 'L'}) {
    for (int i : table.labels) {
      for (int j : table.labels) out << ',' << part << '_' << i << '_' << j;
    }
  }
  out << '\n';
  const auto p = static_cast<Eigen::Index>(table.labels.size());
  for (std::size_t s = 0; s < table.frequencies.size(); ++s) {
    const double f = table.frequencies[s];
    const double omega = 2.0 * std::numbers::pi * f;
    const Eigen::MatrixXcd& z = table.impedance[s];
    out << format_double(f);
    for (Eigen::Index i = 0; i < p; ++i) {
      for (Eigen::Index j = 0; j < p; ++j) out << ',' << format_double(km ? kPerKm * z(i, j).real() : z(i, j).real());
    }
    for (Eigen::Index i = 0; i < p; ++i) {
      for (Eigen::Index j = 0; j < p; ++j) {
        out << ',' << format_double(km ? kPerKm * z(i, j).imag() : z(i, j).imag() / omega);
      }
    }
    out << '\n';
  }
}

ImpedanceTable read_impedance_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::parse, "line 1: missing header");
  const auto header = split(line);
  if (header.empty() || header[0] != "f_hz") throw Error(ErrorKind::parse, "line 1: first column must be f_hz");
  const std::size_t cells = header.size() - 1;
  const auto p = static_cast<std::size_t>(std::lround(std::sqrt(cells / 2.0)));
  if (2 * p * p != cells) throw Error(ErrorKind::parse, "line 1: column count is not 1 + 2 P^2");

  ImpedanceTable table;
  bool km = false;
  if (p > 0) {
    const char second = header[1 + p * p][0];
    if (second != 'L' && second != 'X') throw Error(ErrorKind::parse, "line 1: expected L_ or X_ columns");
    km = second == 'X';
    for (std::size_t j = 0; j < p; ++j) table.labels.push_back(parse_label(header[1 + j], 1 + j).second);
    for (std::size_t c = 1; c < header.size(); ++c) {
      const auto [i, j] = parse_label(header[c], c);
      const std::size_t k = (c - 1) % (p * p);
      if (header[c][0] != (c <= p * p ? 'R' : second) || i != table.labels[k / p] || j != table.labels[k % p]) {
        throw Error(ErrorKind::parse, "line 1: unexpected column '" + header[c] + "'");
      }
    }
  }

  std::size_t line_no = 1;
  const auto n = static_cast<Eigen::Index>(p);
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto row = split(line);
    if (row.size() != header.size()) {
      throw Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(header.size()) + " columns, found " + std::to_string(row.size()));
    }
    const double f = parse_number(row[0], line_no);
    const double omega = 2.0 * std::numbers::pi * f;
    Eigen::MatrixXcd z(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const std::size_t k = 1 + static_cast<std::size_t>(i * n + j);
        const double re = parse_number(row[k], line_no);
        const double im = parse_number(row[k + p * p], line_no);
        z(i, j) = km ? cplx(re, im) / kPerKm : cplx(re, omega * im);
      }
    }
    table.frequencies.push_back(f);
    table.impedance.push_back(std::move(z));
  }
  return table;
}

ImpedanceTable read_impedance_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  return read_impedance_csv(in);
}

void write_sequence_csv(std::ostream& out, const std::vector<SequenceRow>& rows, UnitConvention units) {
  const bool km = units == UnitConvention::per_km;
  out << (km ? "f_hz,R_pos,X_pos,R_zero,X_zero\n" : "f_hz,R_pos,L_pos,R_zero,L_zero\n");
  for (const auto& row : rows) {
    const double omega = 2.0 * std::numbers::pi * row.frequency;
    out << format_double(row.frequency);
    for (cplx z : {row.z.positive, row.z.zero}) {
      if (km) {
        out << ',' << format_double(kPerKm * z.real()) << ',' << format_double(kPerKm * z.imag());
      } else {
        out << ',' << format_double(z.real()) << ',' << format_double(z.imag() / omega);
      }
    }
    out << '\n';
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw Error(ErrorKind::io, "write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::io, "cannot write " + path.string());
  }
}

}  // namespace pulimp
