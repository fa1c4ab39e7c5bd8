#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pulimp/errors.hpp"
#include "pulimp/results_io.hpp"
#include "pulimp/specfun.hpp"

namespace pulimp {

enum class Mode { partial, loop, grounded_reduce, sequence, density_map, oracle_two_wire };

const char* to_string(Mode mode);

struct RunConfig {
  std::filesystem::path input;
  Mode mode = Mode::partial;
  std::optional<int> ref;  // conductor id, loop mode

  // Either an explicit list or a log grid; neither means an empty grid.
  std::vector<double> frequencies;
  std::optional<double> f_min;
  std::optional<double> f_max;
  double points_per_decade = 10.0;

  int order = 3;
  std::filesystem::path orders_file;
  std::filesystem::path out;  // empty: CSV on stdout, no sidecar
  UnitConvention units = UnitConvention::si;
  unsigned threads = 1;
  std::filesystem::path cache_green;

  // density-map
  std::vector<cplx> drive;  // one entry per kept conductor
  int radial_points = 16;
  int angular_points = 64;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitSolver = 4;
inline constexpr int kExitIo = 5;

int exit_code(ErrorKind kind);

/// Lines "<conductor id> <order>", '#' starts a comment. Conductors not
/// listed keep `fallback`. Throws Error(parse) naming the line.
std::vector<int> parse_orders(const std::string& text, const std::vector<int>& ids, int fallback);

/// "1.5", "-2", "0.3:-0.4" (re:im).
cplx parse_complex(const std::string& text);

/// Throws Error(parse) on bad flags. Returns nullopt after printing help.
std::optional<RunConfig> parse_command_line(int argc, const char* const* argv, std::ostream& out);

/// Runs one configuration. On failure writes a single JSON error record to
/// `err` and returns the matching exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

int run_command_line(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pulimp
