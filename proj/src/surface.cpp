#include "holo/surface.hpp"

#include "holo/kernels.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace holo {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

ValidationReport reject(ErrorCode code, const std::string& message) {
  return {code, message};
}

// Distance from d to the lattice <1, tau>, checking the neighbours of the
// nearest lattice point.
double lattice_distance(cplx d, cplx tau) {
  const long n0 = std::lround(d.imag() / tau.imag());
  double best = std::numeric_limits<double>::infinity();
  for (long n = n0 - 1; n <= n0 + 1; ++n) {
    const cplx shifted = d - static_cast<double>(n) * tau;
    const long m0 = std::lround(shifted.real());
    for (long m = m0 - 1; m <= m0 + 1; ++m) {
      best = std::min(best, std::abs(shifted - static_cast<double>(m)));
    }
  }
  return best;
}

}  // namespace

ValidationReport validate(const AffineSurfaceSpec& spec) {
  if (spec.genus != 0 && spec.genus != 1) {
    return reject(ErrorCode::GenusUnsupported,
                  "genus " + std::to_string(spec.genus) + " is not supported (0 or 1)");
  }
  if (spec.genus == 1 && !(spec.tau.imag() > 0.0 && finite(spec.tau))) {
    return reject(ErrorCode::DegenerateLattice, "genus 1 needs Im tau > 0");
  }
  if (!finite(spec.lambda)) return reject(ErrorCode::InvalidSpec, "lambda is not finite");
  if (spec.genus == 0 && spec.lambda != cplx{}) {
    return reject(ErrorCode::InvalidSpec,
                  "genus 0 connections have no free parameter; lambda must be 0");
  }
  cplx sum{};
  for (const auto& c : spec.cone_points) {
    if (!finite(c.position) || !finite(c.order)) {
      return reject(ErrorCode::InvalidSpec, "cone point data is not finite");
    }
    sum += c.order;
  }
  for (std::size_t i = 0; i < spec.cone_points.size(); ++i) {
    for (std::size_t j = i + 1; j < spec.cone_points.size(); ++j) {
      const cplx d = spec.cone_points[i].position - spec.cone_points[j].position;
      const double dist = spec.genus == 1 ? lattice_distance(d, spec.tau) : std::abs(d);
      if (dist < 1e-12) {
        return reject(ErrorCode::InvalidSpec, "cone points " + std::to_string(i) + " and " +
                                                  std::to_string(j) + " coincide");
      }
    }
  }
  const double expected = 2.0 * spec.genus - 2.0;
  if (std::abs(sum - expected) > kGaussBonnetTol) {
    std::ostringstream msg;
    msg << "orders sum to " << sum << " but 2g - 2 = " << expected;
    return reject(ErrorCode::GaussBonnetViolation, msg.str());
  }
  return {};
}

void require_valid(const AffineSurfaceSpec& spec) {
  const auto report = validate(spec);
  if (!report.ok()) throw Error(*report.violation, report.message);
}

bool is_integral_pole(cplx order) {
  const double nearest = std::round(order.real());
  return std::abs(order - cplx(nearest, 0.0)) <= kIntegralTol && nearest <= -1.0;
}

double distance_to_cone_points(const AffineSurfaceSpec& spec, cplx z) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : spec.cone_points) {
    const cplx d = z - c.position;
    best = std::min(best, spec.genus == 1 ? lattice_distance(d, spec.tau) : std::abs(d));
  }
  return best;
}

double min_cone_separation(const AffineSurfaceSpec& spec) {
  double best = std::numeric_limits<double>::infinity();
  const auto& pts = spec.cone_points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const cplx d = pts[i].position - pts[j].position;
      best = std::min(best, spec.genus == 1 ? lattice_distance(d, spec.tau) : std::abs(d));
    }
  }
  if (spec.genus == 1) {
    // A point also sees its own translates.
    best = std::min({best, 1.0, std::abs(spec.tau), std::abs(spec.tau - 1.0),
                     std::abs(spec.tau + 1.0)});
  }
  return best;
}

AffineSurfaceSpec normalized(const AffineSurfaceSpec& spec) {
  AffineSurfaceSpec out = spec;
  if (spec.genus != 1 || spec.cone_points.empty()) return out;
  const cplx shift = spec.cone_points.front().position;
  for (auto& c : out.cone_points) c.position -= shift;
  return out;
}

// -------------------------------------------------------------- Connection

Connection::Connection(const AffineSurfaceSpec& spec) : spec_(spec) {
  require_valid(spec_);
  if (spec_.genus == 1) lattice_.emplace(spec_.tau);
  for (const auto& c : spec_.cone_points) {
    poles_.push_back(c.position);
    coeffs_.push_back(-c.order);
  }
}

void Connection::evaluate(std::span<const cplx> z, std::span<cplx> out) const {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  if (!lattice_) {
    kernels::partial_fractions(z, poles_, coeffs_, out);
    for (std::size_t k = 0; k < z.size(); ++k) {
      if (!finite(out[k])) out[k] = {nan, nan};
    }
    return;
  }
  for (std::size_t k = 0; k < z.size(); ++k) {
    cplx acc = spec_.lambda;
    for (std::size_t j = 0; j < poles_.size(); ++j) {
      if (coeffs_[j] == cplx{}) continue;
      const cplx d = z[k] - poles_[j];
      if (lattice_distance(d, spec_.tau) == 0.0) {
        acc = {nan, nan};
        break;
      }
      acc += coeffs_[j] * lattice_->zeta(d);
    }
    out[k] = acc;
  }
}

cplx Connection::operator()(cplx z) const {
  if (distance_to_cone_points(spec_, z) == 0.0) {
    std::ostringstream msg;
    msg << "connection form evaluated at cone point z = " << z;
    throw Error(ErrorCode::EvaluationAtConePoint, msg.str());
  }
  cplx out;
  evaluate(std::span<const cplx>(&z, 1), std::span<cplx>(&out, 1));
  if (!finite(out)) {
    std::ostringstream msg;
    msg << "connection form not finite at z = " << z;
    throw Error(ErrorCode::EvaluationAtConePoint, msg.str());
  }
  return out;
}

BatchIntegrand Connection::integrand() const {
  return [this](std::span<const cplx> z, std::span<cplx> out) { evaluate(z, out); };
}

cplx Connection::integral(const Path& path, const Quadrature& q) const {
  return integrate(integrand(), path, q);
}

cplx connection_form(const AffineSurfaceSpec& spec, cplx z) { return Connection(spec)(z); }

AffineSurfaceSpec exponential_action(const AffineSurfaceSpec& spec, std::span<const cplx> a,
                                     cplx a0) {
  require_valid(spec);
  if (a.size() != spec.cone_points.size()) {
    throw Error(ErrorCode::InvalidSpec, "exponential action needs one coefficient per cone point");
  }
  if (spec.genus == 0 && a0 != cplx{}) {
    throw Error(ErrorCode::InvalidSpec, "genus 0 has no holomorphic one-forms; a0 must be 0");
  }
  cplx sum{};
  double scale = 1.0;
  for (const cplx ak : a) {
    sum += ak;
    scale = std::max(scale, std::abs(ak));
  }
  if (std::abs(sum) > kGaussBonnetTol * scale) {
    std::ostringstream msg;
    msg << "exponential action coefficients sum to " << sum << ", not 0";
    throw Error(ErrorCode::ResidueSumNonzero, msg.str());
  }
  AffineSurfaceSpec out = spec;
  for (std::size_t j = 0; j < a.size(); ++j) out.cone_points[j].order += a[j];
  out.lambda -= a0;
  require_valid(out);
  return out;
}

cplx flat_multiplier(const AffineSurfaceSpec& spec, const Path& path, const Quadrature& q) {
  if (path.empty()) return {1.0, 0.0};
  return std::exp(-Connection(spec).integral(path, q));
}

bool check_node_gluing(const NodeGluing& gluing) {
  return std::abs(gluing.first + gluing.second + 2.0) <= kGaussBonnetTol;
}

}  // namespace holo
