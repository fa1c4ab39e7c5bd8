#include "pulimp/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pulimp/cross_section_io.hpp"
#include "pulimp/current_density.hpp"
#include "pulimp/geometry.hpp"
#include "pulimp/green.hpp"
#include "pulimp/oracles.hpp"
#include "pulimp/reduction.hpp"
#include "pulimp/solver.hpp"

namespace pulimp {

namespace {

using json = nlohmann::ordered_json;

const std::map<std::string, Mode> kModes = {
    {"partial", Mode::partial},
    {"loop", Mode::loop},
    {"grounded-reduce", Mode::grounded_reduce},
    {"sequence", Mode::sequence},
    {"density-map", Mode::density_map},
    {"oracle-two-wire", Mode::oracle_two_wire},
};

std::string hex(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<int> ids_of(const CrossSection& cs, const std::vector<std::size_t>& idx) {
  std::vector<int> out;
  for (auto i : idx) out.push_back(cs[i].id);
  return out;
}

std::vector<int> all_ids(const CrossSection& cs) {
  std::vector<int> out;
  for (const auto& c : cs.conductors) out.push_back(c.id);
  return out;
}

std::size_t index_of_id(const CrossSection& cs, int id) {
  for (std::size_t p = 0; p < cs.size(); ++p) {
    if (cs[p].id == id) return p;
  }
  throw Error(ErrorKind::validation, "no conductor with id " + std::to_string(id));
}

std::vector<double> frequency_grid(const RunConfig& config) {
  if (!config.frequencies.empty()) return config.frequencies;
  if (config.f_min || config.f_max) {
    if (!config.f_min || !config.f_max) throw Error(ErrorKind::parse, "--fmin and --fmax must be given together");
    return SolveSettings::log_grid(*config.f_min, *config.f_max, config.points_per_decade);
  }
  return {};
}

class Job {
 public:
  Job(const RunConfig& config, std::ostream& err) : config_(config), err_(err) {}

  std::string execute();
  const json& sidecar() const { return sidecar_; }

 private:
  void load();
  void warn(json record) { err_ << json{{"warning", std::move(record)}}.dump() << '\n'; }
  const GreenMatrix& green();
  std::vector<PulResult> solve_all();
  std::vector<std::size_t> kept() const { return indices_with(cs_, Connection::kept); }
  std::vector<std::size_t> grounded() const { return indices_with(cs_, Connection::grounded); }

  std::string impedance_output();
  std::string sequence_output();
  std::string density_output();
  std::string oracle_output();

  const RunConfig& config_;
  std::ostream& err_;
  CrossSection cs_;
  SolveSettings settings_;
  std::optional<GreenMatrix> green_;
  json sidecar_;
  std::vector<double> conditions_;
};

void Job::load() {
  cs_ = read_cross_section(config_.input);
  const auto violations = validate(cs_);
  if (!violations.empty()) {
    std::string msg = "cross-section invalid:";
    for (const auto& v : violations) msg += " [" + v.rule + "] " + v.message + ";";
    msg.pop_back();
    throw Error(ErrorKind::validation, msg);
  }
  for (const auto& w : tangency_warnings(cs_, 1e-9)) warn({{"kind", "tangency"}, {"ids", w.ids}});

  settings_.frequencies = frequency_grid(config_);
  settings_.order = config_.order;
  settings_.threads = std::max(1u, config_.threads);
  if (!config_.orders_file.empty()) {
    settings_.orders = parse_orders(read_text(config_.orders_file), all_ids(cs_), config_.order);
  }
  check_settings(cs_, settings_);

  const auto layout = settings_.layout_for(cs_);
  sidecar_["mode"] = to_string(config_.mode);
  sidecar_["input"] = config_.input.string();
  sidecar_["units"] = to_string(config_.units);
  sidecar_["geometry_hash"] = hex(geometry_hash(cs_));
  sidecar_["orders"] = layout.orders();
  sidecar_["unknowns"] = layout.size();
  sidecar_["frequencies_hz"] = settings_.frequencies;
}

const GreenMatrix& Job::green() {
  if (green_) return *green_;
  const auto layout = settings_.layout_for(cs_);
  const auto key = green_key(cs_, layout);
  if (!config_.cache_green.empty()) {
    green_ = read_green_cache(config_.cache_green, layout, key);
    if (green_) {
      sidecar_["green_cache"] = "hit";
      return *green_;
    }
  }
  green_ = assemble_green(cs_, layout);
  if (!config_.cache_green.empty()) {
    write_green_cache(config_.cache_green, *green_);
    sidecar_["green_cache"] = "written";
  }
  return *green_;
}

std::vector<PulResult> Job::solve_all() {
  if (settings_.frequencies.empty()) return {};
  auto results = sweep(cs_, settings_, green());
  for (const auto& r : results) {
    conditions_.push_back(r.condition);
    if (r.condition > kConditionWarning) {
      warn({{"kind", "ill-conditioned"}, {"f_hz", r.frequency}, {"condition", r.condition}});
    }
  }
  sidecar_["condition"] = conditions_;
  return results;
}

std::string Job::impedance_output() {
  ImpedanceTable table;
  std::size_t ref = 0;
  std::vector<std::size_t> labels_idx;
  switch (config_.mode) {
    case Mode::partial:
      for (std::size_t p = 0; p < cs_.size(); ++p) labels_idx.push_back(p);
      break;
    case Mode::loop:
      if (!config_.ref) throw Error(ErrorKind::validation, "loop mode requires --ref");
      if (cs_.size() < 2) throw Error(ErrorKind::validation, "loop mode needs at least two conductors");
      ref = index_of_id(cs_, *config_.ref);
      for (std::size_t p = 0; p < cs_.size(); ++p) {
        if (p != ref) labels_idx.push_back(p);
      }
      sidecar_["reference_id"] = *config_.ref;
      break;
    default:
      labels_idx = kept();
      if (labels_idx.empty()) throw Error(ErrorKind::validation, "no kept conductors left after grounding");
      sidecar_["grounded_ids"] = ids_of(cs_, grounded());
      break;
  }
  table.labels = ids_of(cs_, labels_idx);
  const auto gnd = grounded();
  for (const auto& r : solve_all()) {
    const auto z = r.impedance();
    table.frequencies.push_back(r.frequency);
    if (config_.mode == Mode::partial) {
      table.impedance.push_back(z);
    } else if (config_.mode == Mode::loop) {
      table.impedance.push_back(reference_reduce(z, ref));
    } else {
      table.impedance.push_back(kron_reduce(z, gnd));
    }
  }
  sidecar_["labels"] = table.labels;
  std::ostringstream os;
  write_impedance_csv(os, table, config_.units);
  return os.str();
}

std::string Job::sequence_output() {
  const auto k = kept();
  if (k.size() != 3) {
    throw Error(ErrorKind::validation, "sequence mode needs exactly 3 kept conductors, found " + std::to_string(k.size()));
  }
  sidecar_["labels"] = ids_of(cs_, k);
  sidecar_["grounded_ids"] = ids_of(cs_, grounded());
  const auto gnd = grounded();
  std::vector<SequenceRow> rows;
  for (const auto& r : solve_all()) {
    const Eigen::Matrix3cd z3 = kron_reduce(r.impedance(), gnd);
    rows.push_back({r.frequency, sequence_impedances(z3)});
  }
  std::ostringstream os;
  write_sequence_csv(os, rows, config_.units);
  return os.str();
}

std::string Job::density_output() {
  const auto k = kept();
  const auto gnd = grounded();
  std::vector<cplx> drive_kept = config_.drive;
  if (drive_kept.empty() && k.size() == 2) drive_kept = {1.0, -1.0};
  if (drive_kept.size() != k.size()) {
    throw Error(ErrorKind::validation, "density-map needs one --drive current per kept conductor (" +
                                           std::to_string(k.size()) + ")");
  }
  if (config_.radial_points < 1 || config_.angular_points < 1) {
    throw Error(ErrorKind::validation, "--nr and --ntheta must be positive");
  }
  sidecar_["drive"] = json::array();
  for (auto c : drive_kept) sidecar_["drive"].push_back({c.real(), c.imag()});
  sidecar_["grid"] = {{"nr", config_.radial_points}, {"ntheta", config_.angular_points}};

  std::ostringstream os;
  os << "f_hz,conductor,x,y,abs_jz,arg_jz\n";
  for (double f : settings_.frequencies) {
    const double omega = 2.0 * std::numbers::pi * f;
    // Grounded conductors take whatever current keeps their voltage drop at zero.
    Eigen::VectorXcd drive = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(cs_.size()));
    Eigen::VectorXcd ik(static_cast<Eigen::Index>(k.size()));
    for (std::size_t i = 0; i < k.size(); ++i) {
      ik(static_cast<Eigen::Index>(i)) = drive_kept[i];
      drive(static_cast<Eigen::Index>(k[i])) = drive_kept[i];
    }
    if (!gnd.empty()) {
      const auto z = pul_partial(cs_, green(), omega).impedance();
      const auto ng = static_cast<Eigen::Index>(gnd.size());
      Eigen::MatrixXcd zgg(ng, ng);
      Eigen::MatrixXcd zgk(ng, static_cast<Eigen::Index>(k.size()));
      for (Eigen::Index a = 0; a < ng; ++a) {
        for (Eigen::Index b = 0; b < ng; ++b) zgg(a, b) = z(static_cast<Eigen::Index>(gnd[a]), static_cast<Eigen::Index>(gnd[b]));
        for (std::size_t b = 0; b < k.size(); ++b) {
          zgk(a, static_cast<Eigen::Index>(b)) = z(static_cast<Eigen::Index>(gnd[a]), static_cast<Eigen::Index>(k[b]));
        }
      }
      const Eigen::VectorXcd ig = -zgg.partialPivLu().solve(zgk * ik);
      for (Eigen::Index a = 0; a < ng; ++a) drive(static_cast<Eigen::Index>(gnd[a])) = ig(a);
    }
    const CurrentDensityField field(cs_, green(), omega, std::span<const cplx>(drive.data(), cs_.size()));
    conditions_.push_back(field.pul().condition);
    for (std::size_t p = 0; p < cs_.size(); ++p) {
      const auto& c = cs_[p];
      for (int i = 0; i < config_.radial_points; ++i) {
        const double r = c.radius * (i + 0.5) / config_.radial_points;
        for (int j = 0; j < config_.angular_points; ++j) {
          const double t = 2.0 * std::numbers::pi * j / config_.angular_points;
          const cplx jz = field.at_polar(p, r, t);
          os << format_double(f) << ',' << c.id << ',' << format_double(c.center_x + r * std::cos(t)) << ','
             << format_double(c.center_y + r * std::sin(t)) << ',' << format_double(std::abs(jz)) << ','
             << format_double(std::arg(jz)) << '\n';
        }
      }
    }
  }
  sidecar_["condition"] = conditions_;
  return os.str();
}

std::string Job::oracle_output() {
  if (cs_.size() != 2) throw Error(ErrorKind::validation, "oracle-two-wire needs exactly two conductors");
  const auto& a = cs_[0];
  const auto& b = cs_[1];
  if (a.radius != b.radius || a.conductivity != b.conductivity || a.rel_permeability != b.rel_permeability) {
    throw Error(ErrorKind::validation, "oracle-two-wire needs two identical conductors");
  }
  if (!(a.conductivity > 0.0)) throw Error(ErrorKind::validation, "oracle-two-wire needs conducting wires");
  TwoWireSpec spec;
  spec.radius = a.radius;
  spec.separation = center_distance(cs_, 0, 1);
  spec.conductivity = a.conductivity;
  spec.rel_permeability = a.rel_permeability;
  const bool km = config_.units == UnitConvention::per_km;
  std::ostringstream os;
  os << (km ? "f_hz,R_hf,X_hf,R_wide,X_wide\n" : "f_hz,R_hf,L_hf,R_wide,L_wide\n");
  for (double f : settings_.frequencies) {
    spec.frequency = f;
    const double omega = 2.0 * std::numbers::pi * f;
    const auto hf = two_wire_hf(spec);
    const cplx wide = two_wire_wide(spec);
    os << format_double(f);
    if (km) {
      os << ',' << format_double(1e3 * hf.resistance) << ',' << format_double(1e3 * omega * hf.inductance) << ','
         << format_double(1e3 * wide.real()) << ',' << format_double(1e3 * wide.imag());
    } else {
      os << ',' << format_double(hf.resistance) << ',' << format_double(hf.inductance) << ','
         << format_double(wide.real()) << ',' << format_double(wide.imag() / omega);
    }
    os << '\n';
  }
  return os.str();
}

std::string Job::execute() {
  load();
  switch (config_.mode) {
    case Mode::sequence: return sequence_output();
    case Mode::density_map: return density_output();
    case Mode::oracle_two_wire: return oracle_output();
    default: return impedance_output();
  }
}

void emit_error(std::ostream& err, ErrorKind kind, const std::string& message) {
  err << json{{"error", {{"kind", to_string(kind)}, {"exit_code", exit_code(kind)}, {"message", message}}}}.dump()
      << '\n';
}

}  // namespace

const char* to_string(Mode mode) {
  for (const auto& [name, m] : kModes) {
    if (m == mode) return name.c_str();
  }
  return "unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse: return kExitParse;
    case ErrorKind::validation: return kExitValidation;
    case ErrorKind::solver: return kExitSolver;
    case ErrorKind::io: return kExitIo;
  }
  return kExitSolver;
}

std::vector<int> parse_orders(const std::string& text, const std::vector<int>& ids, int fallback) {
  std::vector<int> orders(ids.size(), fallback);
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    int id = 0;
    int order = 0;
    if (!(ls >> id)) {
      ls.clear();
      std::string rest;
      if (ls >> rest) throw Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": expected '<id> <order>'");
      continue;
    }
    std::string extra;
    if (!(ls >> order) || (ls >> extra)) {
      throw Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": expected '<id> <order>'");
    }
    if (order < 0) throw Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": order must be non-negative");
    const auto it = std::find(ids.begin(), ids.end(), id);
    if (it == ids.end()) throw Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": unknown conductor id " + std::to_string(id));
    orders[static_cast<std::size_t>(it - ids.begin())] = order;
  }
  return orders;
}

cplx parse_complex(const std::string& text) {
  const auto colon = text.find(':');
  try {
    std::size_t used = 0;
    const std::string re_text = text.substr(0, colon);
    const double re = std::stod(re_text, &used);
    if (used != re_text.size()) throw std::invalid_argument(text);
    if (colon == std::string::npos) return {re, 0.0};
    const std::string im_text = text.substr(colon + 1);
    const double im = std::stod(im_text, &used);
    if (used != im_text.size()) throw std::invalid_argument(text);
    return {re, im};
  } catch (const std::exception&) {
    throw Error(ErrorKind::parse, "'" + text + "' is not a current (re or re:im)");
  }
}

std::optional<RunConfig> parse_command_line(int argc, const char* const* argv, std::ostream& out) {
  RunConfig config;
  CLI::App app{"Per-unit-length series resistance and inductance of round parallel conductors", "pulimp"};
  std::string input;
  std::string mode = "partial";
  std::string units = "si";
  std::vector<std::string> drive;
  std::optional<int> ref;
  std::optional<double> f_min;
  std::optional<double> f_max;

  app.add_option("--input", input, "cross-section JSON file")->required();
  std::map<std::string, std::string> mode_names;
  for (const auto& [name, m] : kModes) mode_names[name] = name;
  app.add_option("--mode", mode, "partial | loop | grounded-reduce | sequence | density-map | oracle-two-wire")
      ->check(CLI::IsMember(mode_names));
  auto* fmin_opt = app.add_option("--fmin", f_min, "lowest frequency of the log grid [Hz]");
  auto* fmax_opt = app.add_option("--fmax", f_max, "highest frequency of the log grid [Hz]");
  auto* ppd_opt = app.add_option("--ppd", config.points_per_decade, "log grid points per decade");
  auto* freqs_opt = app.add_option("--freqs", config.frequencies, "explicit frequencies [Hz], comma separated")
                        ->delimiter(',');
  freqs_opt->excludes(fmin_opt)->excludes(fmax_opt)->excludes(ppd_opt);
  fmin_opt->needs(fmax_opt);
  fmax_opt->needs(fmin_opt);
  app.add_option("--order", config.order, "truncation order for every conductor")->check(CLI::NonNegativeNumber);
  app.add_option("--orders-file", config.orders_file, "per-conductor orders, lines '<id> <order>'");
  app.add_option("--ref", ref, "reference conductor id (loop mode)");
  app.add_option("--out", config.out, "output CSV; a sidecar <out>.json is written next to it");
  app.add_option("--units", units, "si | per-km")->check(CLI::IsMember({"si", "per-km"}));
  app.add_option("--threads", config.threads, "frequency samples solved concurrently")->check(CLI::PositiveNumber);
  app.add_option("--cache-green", config.cache_green, "Green matrix cache file");
  app.add_option("--drive", drive, "density-map currents per kept conductor, re or re:im")->delimiter(',');
  app.add_option("--nr", config.radial_points, "density-map radial samples per conductor");
  app.add_option("--ntheta", config.angular_points, "density-map angular samples per conductor");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorKind::parse, e.what());
  }
  config.input = input;
  config.mode = kModes.at(mode);
  config.units = units == "si" ? UnitConvention::si : UnitConvention::per_km;
  config.ref = ref;
  config.f_min = f_min;
  config.f_max = f_max;
  for (const auto& d : drive) config.drive.push_back(parse_complex(d));
  return config;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    Job job(config, err);
    const std::string csv = job.execute();
    if (config.out.empty()) {
      out << csv;
    } else {
      write_file_atomic(config.out, csv);
      write_file_atomic(config.out.string() + ".json", job.sidecar().dump(2) + "\n");
    }
    return kExitOk;
  } catch (const Error& e) {
    emit_error(err, e.kind(), e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    emit_error(err, ErrorKind::solver, e.what());
    return kExitSolver;
  }
}

int run_command_line(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::optional<RunConfig> config;
  try {
    config = parse_command_line(argc, argv, out);
  } catch (const Error& e) {
    emit_error(err, e.kind(), e.what());
    return exit_code(e.kind());
  }
  if (!config) return kExitOk;
  return run(*config, out, err);
}

}  // namespace pulimp
