#pragma once

// Affine surfaces of genus 0 and 1 as explicit triples (X, C, connection).
//
// Convention: a cone point of order m is a simple pole of the connection
// form with residue -m. At genus 0 the form is
//   Gamma(z) = sum_j (-m_j) / (z - c_j),
// and at genus 1 (lattice <1, tau>)
//   Gamma(z) = lambda + sum_j (-m_j) zeta(z - c_j).
// Flat one-forms f dz satisfy f' = -Gamma f, so f = prod_j (z - c_j)^{m_j}
// up to scale at genus 0.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "holo/error.hpp"
#include "holo/numerics.hpp"
#include "holo/weierstrass.hpp"

namespace holo {

struct ConePoint {
  cplx position;
  cplx order;

  bool operator==(const ConePoint&) const = default;
};

struct AffineSurfaceSpec {
  int genus = 0;
  cplx tau{0.0, 1.0};  // genus 1 only
  cplx lambda{};       // genus 1 only
  std::vector<ConePoint> cone_points;

  bool operator==(const AffineSurfaceSpec&) const = default;
};

struct ValidationReport {
  std::optional<ErrorCode> violation;
  std::string message;

  bool ok() const noexcept { return !violation.has_value(); }
};

inline constexpr double kGaussBonnetTol = 1e-12;
inline constexpr double kIntegralTol = 1e-9;

ValidationReport validate(const AffineSurfaceSpec& spec);
/// Throws the reported violation as holo::Error.
void require_valid(const AffineSurfaceSpec& spec);

/// True when the order is a negative integer (within 1e-9).
bool is_integral_pole(cplx order);

/// Distance from z to the nearest cone point (and its lattice translates at
/// genus 1).
double distance_to_cone_points(const AffineSurfaceSpec& spec, cplx z);
/// Smallest pairwise distance between cone points, lattice translates
/// included at genus 1. Infinity with fewer than two cone points at genus 0.
double min_cone_separation(const AffineSurfaceSpec& spec);

/// Translates a genus-1 spec so the first cone point sits at 0.
AffineSurfaceSpec normalized(const AffineSurfaceSpec& spec);

/// Cached evaluator of the connection form of one spec.
class Connection {
 public:
  explicit Connection(const AffineSurfaceSpec& spec);

  const AffineSurfaceSpec& spec() const noexcept { return spec_; }

  /// Throws EvaluationAtConePoint at a cone point.
  cplx operator()(cplx z) const;
  /// Batch evaluation; cone points yield NaN so the quadrature engine can
  /// report NonFiniteEvaluation.
  void evaluate(std::span<const cplx> z, std::span<cplx> out) const;
  BatchIntegrand integrand() const;

  /// Integral of Gamma along a path.
  cplx integral(const Path& path, const Quadrature& q = {}) const;

 private:
  AffineSurfaceSpec spec_;
  std::optional<LatticeData> lattice_;
  std::vector<cplx> poles_;
  std::vector<cplx> coeffs_;
};

cplx connection_form(const AffineSurfaceSpec& spec, cplx z);

/// Replaces the connection by (connection - alpha) where alpha has residue
/// a_j at c_j (and constant part a0 at genus 1). Orders become m_j + a_j and
/// lambda becomes lambda - a0. Throws ResidueSumNonzero unless sum a_j = 0.
AffineSurfaceSpec exponential_action(const AffineSurfaceSpec& spec,
                                     std::span<const cplx> a, cplx a0 = {});

/// exp(-integral of Gamma along the path): the flat one-form's multiplier at
/// the path end, normalized to 1 at the path start. An empty path gives 1.
cplx flat_multiplier(const AffineSurfaceSpec& spec, const Path& path,
                     const Quadrature& q = {});

struct NodeGluing {
  cplx first;
  cplx second;
};

/// True iff the two branch orders sum to -2 (within kGaussBonnetTol, which
/// absorbs the rounding of b = -2 - a).
bool check_node_gluing(const NodeGluing& gluing);

}  // namespace holo
