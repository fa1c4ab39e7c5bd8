#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace pulimp {

inline constexpr double kMu0 = 4.0e-7 * std::numbers::pi;   // H/m
inline constexpr double kEps0 = 8.8541878128e-12;            // F/m

enum class Role { phase, screen, armor, other };
enum class Connection { kept, grounded };

/// One solid round conductor parallel to z. All lengths in meters.
struct Conductor {
  int id = 0;
  double center_x = 0.0;
  double center_y = 0.0;
  double radius = 0.0;
  double conductivity = 0.0;      // S/m
  double rel_permeability = 1.0;
  double rel_permittivity = 1.0;  // 0 means "no displacement current"
  Role role = Role::other;
  Connection connection = Connection::kept;

  double permeability() const { return rel_permeability * kMu0; }
  double permittivity() const { return rel_permittivity * kEps0; }
};

/// Ordered conductors in a homogeneous lossless outer medium (mu = mu0).
struct CrossSection {
  std::vector<Conductor> conductors;
  double outer_permittivity = kEps0;  // F/m

  std::size_t size() const { return conductors.size(); }
  const Conductor& operator[](std::size_t p) const { return conductors[p]; }
};

struct Violation {
  std::vector<int> ids;  // offending conductor ids (empty for section-level rules)
  std::string rule;
  std::string message;
};

/// Checks every cross-section invariant. Pairs with d < a_p + a_q + gap_tol
/// are reported as overlaps; the default tolerance admits exact tangency.
std::vector<Violation> validate(const CrossSection& cs, double gap_tol = 0.0);

/// Pairs that are tangent within `rel_tol` of their radius sum. Not errors.
std::vector<Violation> tangency_warnings(const CrossSection& cs, double rel_tol = 1e-9);

/// Euclidean distance between the centers of conductors p and q.
/// Throws std::out_of_range on bad indices or p == q.
double center_distance(const CrossSection& cs, std::size_t p, std::size_t q);

std::vector<std::size_t> indices_with(const CrossSection& cs, Connection connection);

/// Two identical wires on the x axis, centered on the origin.
CrossSection two_wire(double radius, double separation, double conductivity, double rel_permeability = 1.0);

/// Armored three-phase cable, 239 conductors: three touching single-core
/// cables in trefoil (core 10 mm, 32 screen wires of 0.5 mm) inside two
/// layers of 70 magnetic steel armor wires (3 mm, outer diameter 88.26 mm).
/// Ids run cores, screens cable by cable, outer armor layer, inner layer.
/// Cores are phase/kept; screen and armor wires are grounded.
CrossSection three_phase_armored_cable();

/// Stable 64-bit digest of everything the Green matrix depends on
/// (centers, radii, count). Material data is excluded.
std::uint64_t geometry_hash(const CrossSection& cs);

/// Maps (conductor p, harmonic n) to the position of the coefficient in the
/// stacked field/current vectors: conductors in order, n = -N_p..N_p.
class HarmonicLayout {
 public:
  explicit HarmonicLayout(std::vector<int> orders);
  static HarmonicLayout uniform(std::size_t conductors, int order);

  std::size_t size() const { return size_; }
  std::size_t conductors() const { return orders_.size(); }
  int order(std::size_t p) const { return orders_[p]; }
  std::size_t offset(std::size_t p) const { return offsets_[p]; }
  const std::vector<int>& orders() const { return orders_; }
  int max_order() const;

  std::size_t index(std::size_t p, int n) const;
  std::size_t zero_index(std::size_t p) const { return offsets_[p] + static_cast<std::size_t>(orders_[p]); }
  std::pair<std::size_t, int> locate(std::size_t index) const;

  std::uint64_t hash() const;

  bool operator==(const HarmonicLayout& other) const { return orders_ == other.orders_; }

 private:
  std::vector<int> orders_;
  std::vector<std::size_t> offsets_;
  std::size_t size_ = 0;
};

}  // namespace pulimp
