#include "pulimp/solver.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "pulimp/errors.hpp"

namespace pulimp {

namespace {

constexpr double kSingular = std::numeric_limits<double>::epsilon();

std::string condition_text(double rcond) {
  std::ostringstream os;
  os << "condition estimate " << (rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity());
  return os.str();
}

}  // namespace

double PulResult::omega() const { return 2.0 * std::numbers::pi * frequency; }

Eigen::MatrixXcd PulResult::impedance() const {
  return R.cast<cplx>() + cplx(0.0, omega()) * L.cast<cplx>();
}

PulResult make_result(double frequency, const Eigen::MatrixXcd& z) {
  PulResult r;
  r.frequency = frequency;
  r.R = z.real();
  r.L = z.imag() / (2.0 * std::numbers::pi * frequency);
  return r;
}

HarmonicLayout SolveSettings::layout_for(const CrossSection& cs) const {
  if (!orders.empty()) return HarmonicLayout(orders);
  return HarmonicLayout::uniform(cs.size(), order);
}

std::vector<double> SolveSettings::log_grid(double f_min, double f_max, double points_per_decade) {
  if (!(f_min > 0.0) || !(f_max >= f_min) || !(points_per_decade > 0.0)) {
    throw Error(ErrorKind::validation, "log grid needs 0 < f_min <= f_max and points_per_decade > 0");
  }
  const double decades = std::log10(f_max / f_min);
  const auto steps = static_cast<int>(std::lround(decades * points_per_decade));
  std::vector<double> out;
  if (steps == 0) return {f_min};
  for (int i = 0; i <= steps; ++i) out.push_back(f_min * std::pow(10.0, decades * i / steps));
  out.back() = f_max;
  return out;
}

void check_settings(const CrossSection& cs, const SolveSettings& settings) {
  if (settings.orders.empty()) {
    if (settings.order < 0) throw Error(ErrorKind::validation, "truncation order must be non-negative");
  } else {
    if (settings.orders.size() != cs.size()) {
      throw Error(ErrorKind::validation, "expected " + std::to_string(cs.size()) + " truncation orders, got " +
                                             std::to_string(settings.orders.size()));
    }
    for (int n : settings.orders) {
      if (n < 0) throw Error(ErrorKind::validation, "truncation order must be non-negative");
    }
  }
  double previous = 0.0;
  for (double f : settings.frequencies) {
    if (!(f > previous) || !std::isfinite(f)) {
      throw Error(ErrorKind::validation, "frequencies must be strictly positive and ascending");
    }
    previous = f;
  }
}

MomSolution solve_mom(const CrossSection& cs, const GreenMatrix& green, double omega) {
  const auto& layout = green.layout;
  if (layout.conductors() != cs.size()) throw Error(ErrorKind::validation, "Green matrix layout does not match cross-section");

  MomSolution sol;
  sol.ys = assemble_ys(cs, layout, omega);
  const auto n = static_cast<Eigen::Index>(layout.size());
  const auto p_count = static_cast<Eigen::Index>(cs.size());

  // A = 1 - j w mu0 Ys G, Ys diagonal so it scales rows.
  Eigen::MatrixXcd a = green.data;
  const cplx jwm = cplx(0.0, omega * kMu0);
  for (Eigen::Index i = 0; i < n; ++i) a.row(i) *= -jwm * sol.ys.diagonal[static_cast<std::size_t>(i)];
  a.diagonal().array() += 1.0;

  Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(n, p_count);
  for (Eigen::Index p = 0; p < p_count; ++p) {
    const auto i = layout.zero_index(static_cast<std::size_t>(p));
    rhs(static_cast<Eigen::Index>(i), p) = sol.ys.diagonal[i];
  }

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond > kSingular)) throw Error(ErrorKind::solver, "ill-conditioned system: " + condition_text(rcond));
  sol.response = lu.solve(rhs);

  Eigen::MatrixXcd admittance(p_count, p_count);
  for (Eigen::Index p = 0; p < p_count; ++p) {
    admittance.row(p) = sol.response.row(static_cast<Eigen::Index>(layout.zero_index(static_cast<std::size_t>(p))));
  }
  Eigen::PartialPivLU<Eigen::MatrixXcd> small(admittance);
  const double rcond_small = small.rcond();
  if (!(rcond_small > kSingular)) {
    throw Error(ErrorKind::solver, "ill-conditioned system: conductor admittance matrix, " + condition_text(rcond_small));
  }

  sol.pul = make_result(omega / (2.0 * std::numbers::pi), small.inverse());
  sol.pul.condition = 1.0 / rcond;
  sol.pul.orders = layout.orders();
  sol.pul.geometry_hash = geometry_hash(cs);
  return sol;
}

PulResult pul_partial(const CrossSection& cs, const GreenMatrix& green, double omega) {
  return solve_mom(cs, green, omega).pul;
}

std::vector<PulResult> sweep(const CrossSection& cs, const SolveSettings& settings) {
  check_settings(cs, settings);
  if (settings.frequencies.empty()) return {};
  const auto green = assemble_green(cs, settings.layout_for(cs));
  return sweep(cs, settings, green);
}

std::vector<PulResult> sweep(const CrossSection& cs, const SolveSettings& settings, const GreenMatrix& green) {
  check_settings(cs, settings);
  if (!(green.layout == settings.layout_for(cs))) {
    throw Error(ErrorKind::validation, "Green matrix was assembled for different truncation orders");
  }
  const auto& freqs = settings.frequencies;
  std::vector<PulResult> results(freqs.size());
  std::vector<std::exception_ptr> errors(freqs.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < freqs.size(); i = next++) {
      try {
        results[i] = pul_partial(cs, green, 2.0 * std::numbers::pi * freqs[i]);
        results[i].frequency = freqs[i];
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(settings.threads, static_cast<unsigned>(freqs.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t i = 0; i < freqs.size(); ++i) {
    if (!errors[i]) continue;
    std::ostringstream where;
    where << "f = " << freqs[i] << " Hz: ";
    try {
      std::rethrow_exception(errors[i]);
    } catch (const Error& e) {
      throw Error(e.kind(), where.str() + e.what());
    } catch (const std::exception& e) {
      throw Error(ErrorKind::solver, where.str() + e.what());
    }
  }
  return results;
}

}  // namespace pulimp
