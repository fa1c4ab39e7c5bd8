#include "pulimp/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pulimp {

namespace {

std::string pair_label(const Conductor& a, const Conductor& b) {
  std::ostringstream os;
  os << "conductors " << a.id << " and " << b.id;
  return os.str();
}

class Fnv1a {
 public:
  void add(std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      state_ ^= (word >> (8 * i)) & 0xffu;
      state_ *= 0x100000001b3ull;
    }
  }
  void add(double value) { add(std::bit_cast<std::uint64_t>(value == 0.0 ? 0.0 : value)); }
  std::uint64_t value() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ull;
};

}  // namespace

std::vector<Violation> validate(const CrossSection& cs, double gap_tol) {
  std::vector<Violation> out;
  if (cs.conductors.empty()) {
    out.push_back({{}, "P >= 1", "cross-section has no conductors"});
  }
  if (!(cs.outer_permittivity > 0.0) || !std::isfinite(cs.outer_permittivity)) {
    out.push_back({{}, "outer_permittivity > 0", "outer permittivity must be positive"});
  }

  std::set<int> seen;
  for (const auto& c : cs.conductors) {
    auto report = [&](const char* rule, const std::string& what) {
      out.push_back({{c.id}, rule, "conductor " + std::to_string(c.id) + ": " + what});
    };
    if (!seen.insert(c.id).second) report("unique id", "duplicate id");
    if (!std::isfinite(c.center_x) || !std::isfinite(c.center_y)) report("finite center", "center is not finite");
    if (!(c.radius > 0.0) || !std::isfinite(c.radius)) report("radius > 0", "radius must be positive");
    if (!(c.conductivity >= 0.0) || !std::isfinite(c.conductivity)) {
      report("conductivity >= 0", "conductivity must be non-negative");
    }
    if (!(c.rel_permeability > 0.0) || !std::isfinite(c.rel_permeability)) {
      report("rel_permeability > 0", "relative permeability must be positive");
    }
    if (!(c.rel_permittivity >= 1.0 || c.rel_permittivity == 0.0) || !std::isfinite(c.rel_permittivity)) {
      report("rel_permittivity >= 1 or = 0", "relative permittivity must be >= 1 (or exactly 0)");
    }
  }

  for (std::size_t p = 0; p < cs.size(); ++p) {
    for (std::size_t q = p + 1; q < cs.size(); ++q) {
      const auto& a = cs[p];
      const auto& b = cs[q];
      const double d = std::hypot(a.center_x - b.center_x, a.center_y - b.center_y);
      if (d < a.radius + b.radius + gap_tol) {
        std::ostringstream os;
        os << pair_label(a, b) << " overlap: distance " << d << " m < " << a.radius + b.radius + gap_tol << " m";
        out.push_back({{a.id, b.id}, "non-overlap", os.str()});
      }
    }
  }
  return out;
}

std::vector<Violation> tangency_warnings(const CrossSection& cs, double rel_tol) {
  std::vector<Violation> out;
  for (std::size_t p = 0; p < cs.size(); ++p) {
    for (std::size_t q = p + 1; q < cs.size(); ++q) {
      const auto& a = cs[p];
      const auto& b = cs[q];
      const double sum = a.radius + b.radius;
      const double d = std::hypot(a.center_x - b.center_x, a.center_y - b.center_y);
      if (std::abs(d - sum) <= rel_tol * sum) {
        out.push_back({{a.id, b.id}, "tangency", pair_label(a, b) + " are tangent"});
      }
    }
  }
  return out;
}

double center_distance(const CrossSection& cs, std::size_t p, std::size_t q) {
  if (p >= cs.size() || q >= cs.size()) throw std::out_of_range("center_distance: conductor index out of range");
  if (p == q) throw std::out_of_range("center_distance: p and q must differ");
  return std::hypot(cs[p].center_x - cs[q].center_x, cs[p].center_y - cs[q].center_y);
}

std::vector<std::size_t> indices_with(const CrossSection& cs, Connection connection) {
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < cs.size(); ++p) {
    if (cs[p].connection == connection) out.push_back(p);
  }
  return out;
}

CrossSection two_wire(double radius, double separation, double conductivity, double rel_permeability) {
  CrossSection cs;
  for (int i = 0; i < 2; ++i) {
    Conductor c;
    c.id = i + 1;
    c.center_x = (i == 0 ? -0.5 : 0.5) * separation;
    c.radius = radius;
    c.conductivity = conductivity;
    c.rel_permeability = rel_permeability;
    c.role = Role::phase;
    cs.conductors.push_back(c);
  }
  return cs;
}

CrossSection three_phase_armored_cable() {
  using std::numbers::pi;
  constexpr double copper = 58e6;
  constexpr double core_radius = 10.0e-3;
  constexpr double insulation = 4.0e-3;
  constexpr double screen_wire_radius = 0.5e-3;
  constexpr double jacket = 2.0e-3;
  constexpr int screen_wires = 32;
  constexpr double armor_outer_diameter = 88.26e-3;
  constexpr double armor_wire_radius = 1.5e-3;
  constexpr int armor_wires = 70;

  // Touching trefoil: cable outer radius 17 mm, centers on a circle of 34/sqrt(3) mm.
  constexpr double cable_radius = core_radius + insulation + 2.0 * screen_wire_radius + jacket;
  const double trefoil_radius = 2.0 * cable_radius / std::sqrt(3.0);
  constexpr double screen_ring = core_radius + insulation + screen_wire_radius;
  constexpr double armor_ring = 0.5 * armor_outer_diameter - armor_wire_radius;

  CrossSection cs;
  int next_id = 1;
  auto add = [&](double x, double y, double r, double sigma, double mu_r, Role role, Connection conn) {
    Conductor c;
    c.id = next_id++;
    c.center_x = x;
    c.center_y = y;
    c.radius = r;
    c.conductivity = sigma;
    c.rel_permeability = mu_r;
    c.role = role;
    c.connection = conn;
    cs.conductors.push_back(c);
  };

  std::vector<std::pair<double, double>> centers;
  for (int k = 0; k < 3; ++k) {
    const double phi = pi / 2.0 + 2.0 * pi * k / 3.0;
    centers.emplace_back(trefoil_radius * std::cos(phi), trefoil_radius * std::sin(phi));
  }
  for (const auto& [x, y] : centers) add(x, y, core_radius, copper, 1.0, Role::phase, Connection::kept);
  for (const auto& [x, y] : centers) {
    for (int w = 0; w < screen_wires; ++w) {
      const double phi = 2.0 * pi * w / screen_wires;
      add(x + screen_ring * std::cos(phi), y + screen_ring * std::sin(phi), screen_wire_radius, copper, 1.0,
          Role::screen, Connection::grounded);
    }
  }
  // Two layers of 70: the outer one sets the 88.26 mm diameter, the inner one
  // sits one wire diameter further in, staggered by half a pitch.
  for (int layer = 0; layer < 2; ++layer) {
    const double ring = armor_ring - layer * 2.0 * armor_wire_radius;
    for (int w = 0; w < armor_wires; ++w) {
      const double phi = 2.0 * pi * (w + 0.5 * layer) / armor_wires;
      add(ring * std::cos(phi), ring * std::sin(phi), armor_wire_radius, 1e7, 100.0, Role::armor,
          Connection::grounded);
    }
  }
  return cs;
}

std::uint64_t geometry_hash(const CrossSection& cs) {
  Fnv1a h;
  h.add(static_cast<std::uint64_t>(cs.size()));
  for (const auto& c : cs.conductors) {
    h.add(c.center_x);
    h.add(c.center_y);
    h.add(c.radius);
  }
  return h.value();
}

HarmonicLayout::HarmonicLayout(std::vector<int> orders) : orders_(std::move(orders)) {
  offsets_.reserve(orders_.size());
  for (int n : orders_) {
    if (n < 0) throw std::invalid_argument("HarmonicLayout: truncation order must be non-negative");
    offsets_.push_back(size_);
    size_ += static_cast<std::size_t>(2 * n + 1);
  }
}

HarmonicLayout HarmonicLayout::uniform(std::size_t conductors, int order) {
  return HarmonicLayout(std::vector<int>(conductors, order));
}

int HarmonicLayout::max_order() const {
  return orders_.empty() ? 0 : *std::max_element(orders_.begin(), orders_.end());
}

std::size_t HarmonicLayout::index(std::size_t p, int n) const {
  if (p >= orders_.size()) throw std::out_of_range("HarmonicLayout: conductor index out of range");
  if (n < -orders_[p] || n > orders_[p]) throw std::out_of_range("HarmonicLayout: harmonic out of range");
  return offsets_[p] + static_cast<std::size_t>(n + orders_[p]);
}

std::pair<std::size_t, int> HarmonicLayout::locate(std::size_t index) const {
  if (index >= size_) throw std::out_of_range("HarmonicLayout: global index out of range");
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), index);
  const auto p = static_cast<std::size_t>(std::distance(offsets_.begin(), it) - 1);
  return {p, static_cast<int>(index - offsets_[p]) - orders_[p]};
}

std::uint64_t HarmonicLayout::hash() const {
  Fnv1a h;
  h.add(static_cast<std::uint64_t>(orders_.size()));
  for (int n : orders_) h.add(static_cast<std::uint64_t>(n));
  return h.value();
}

}  // namespace pulimp
