#include "holo/holonomy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace holo {

cplx log_holonomy(const Connection& connection, const LoopPath& loop, const Quadrature& q) {
  return -connection.integral(loop.trace(connection.spec().tau), q);
}

cplx holonomy(const AffineSurfaceSpec& spec, const LoopPath& loop, const Quadrature& q) {
  return std::exp(log_holonomy(Connection(spec), loop, q));
}

int velocity_winding(const LoopPath& loop) {
  switch (loop.kind()) {
    case LoopPath::Kind::Circle:
      return loop.orientation();
    case LoopPath::Kind::LatticeA:
    case LoopPath::Kind::LatticeB:
      return 0;
    case LoopPath::Kind::Samples:
      break;
  }
  // Closed list with first == last: the distinct samples are [0, n).
  const auto& pts = loop.points();
  const std::size_t n = pts.size() - 1;
  std::vector<cplx> velocity(n + 1);
  for (std::size_t k = 0; k < n; ++k) {
    const cplx d = pts[(k + 1) % n] - pts[(k + n - 1) % n];
    if (d == cplx{}) {
      throw Error(ErrorCode::ZeroDerivativeSample,
                  "sampled loop has zero derivative at sample " + std::to_string(k));
    }
    velocity[k] = d;
  }
  velocity[n] = velocity[0];
  const auto logs = continuous_log(velocity);
  return static_cast<int>(std::lround(((logs.back() - logs.front()) / kTwoPiI).real()));
}

cplx turning_number(const Connection& connection, const LoopPath& loop, const Quadrature& q) {
  const cplx integral = connection.integral(loop.trace(connection.spec().tau), q);
  return static_cast<double>(velocity_winding(loop)) - integral / kTwoPiI;
}

cplx turning_number(const AffineSurfaceSpec& spec, const LoopPath& loop, const Quadrature& q) {
  return turning_number(Connection(spec), loop, q);
}

namespace {

// Middle of the widest gap among fractional parts in [0, 1).
double widest_gap_center(std::vector<double> fractions) {
  if (fractions.empty()) return 0.5;
  for (auto& f : fractions) f -= std::floor(f);
  std::sort(fractions.begin(), fractions.end());
  double best_gap = -1.0;
  double center = 0.5;
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    const double lo = fractions[i];
    const double hi = i + 1 < fractions.size() ? fractions[i + 1] : fractions.front() + 1.0;
    if (hi - lo > best_gap) {
      best_gap = hi - lo;
      center = 0.5 * (lo + hi);
    }
  }
  return center - std::floor(center);
}

}  // namespace

std::vector<NamedLoop> standard_basis(const AffineSurfaceSpec& spec) {
  require_valid(spec);
  std::vector<NamedLoop> basis;
  const auto& pts = spec.cone_points;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    double nearest = std::numeric_limits<double>::infinity();
    AffineSurfaceSpec others = spec;
    others.cone_points.erase(others.cone_points.begin() + static_cast<long>(j));
    if (!others.cone_points.empty()) nearest = distance_to_cone_points(others, pts[j].position);
    if (spec.genus == 1) {
      nearest = std::min({nearest, 1.0, std::abs(spec.tau), std::abs(spec.tau - 1.0),
                          std::abs(spec.tau + 1.0)});
    }
    const double radius = std::isfinite(nearest) ? 0.3 * nearest : 0.5;
    basis.push_back({"c" + std::to_string(j), LoopPath::circle(pts[j].position, radius, 1)});
  }
  if (spec.genus == 1) {
    // Coordinates z = x + y tau; the a-loop runs at constant y, the b-loop at
    // constant x, each through the widest gap between cone points.
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& c : pts) {
      const double y = c.position.imag() / spec.tau.imag();
      xs.push_back(c.position.real() - y * spec.tau.real());
      ys.push_back(y);
    }
    const double x0 = widest_gap_center(xs);
    const double y0 = widest_gap_center(ys);
    const cplx base = x0 + y0 * spec.tau;
    basis.push_back({"a", LoopPath::lattice_a(base)});
    basis.push_back({"b", LoopPath::lattice_b(base)});
  }
  return basis;
}

HolonomyReport character_on_basis(const AffineSurfaceSpec& spec,
                                  const std::vector<NamedLoop>& basis, const Quadrature& q) {
  const Connection connection(spec);
  HolonomyReport report;
  bool framing_ok = true;
  for (const auto& named : basis) {
    const cplx integral = connection.integral(named.loop.trace(spec.tau), q);
    const cplx chi = std::exp(-integral);
    const cplx tau = static_cast<double>(velocity_winding(named.loop)) - integral / kTwoPiI;
    report.ids.push_back(named.id);
    report.chi.push_back(chi);
    report.tau.push_back(tau);
    if (!named.id.empty() && named.id.front() == 'c') report.cone_product *= chi;
    framing_ok = framing_ok && std::abs(std::exp(kTwoPiI * tau) - chi) <= kHolonomyTol;
  }
  report.consistent = framing_ok && std::abs(report.cone_product - 1.0) <= kHolonomyTol;
  return report;
}

bool has_trivial_holonomy(const HolonomyReport& report, double tol) {
  return std::all_of(report.chi.begin(), report.chi.end(),
                     [tol](cplx chi) { return std::abs(chi - 1.0) <= tol; });
}

std::string_view to_string(TranslationType type) noexcept {
  switch (type) {
    case TranslationType::FiniteArea: return "finite_area";
    case TranslationType::InfiniteArea: return "infinite_area";
    case TranslationType::NotTranslation: return "not_translation";
  }
  return "unknown";
}

TranslationType is_translation_surface(const AffineSurfaceSpec& spec, const Quadrature& q) {
  const auto report = character_on_basis(spec, standard_basis(spec), q);
  if (!has_trivial_holonomy(report)) return TranslationType::NotTranslation;
  const bool has_pole = std::any_of(spec.cone_points.begin(), spec.cone_points.end(),
                                    [](const ConePoint& c) { return c.order.real() <= -1.0 + kIntegralTol; });
  return has_pole ? TranslationType::InfiniteArea : TranslationType::FiniteArea;
}

}  // namespace holo
