#pragma once

// Holonomy characters and complex turning numbers on explicit loops.

#include <string>
#include <vector>

#include "holo/numerics.hpp"
#include "holo/surface.hpp"

namespace holo {

inline constexpr double kHolonomyTol = 1e-9;

/// log chi(gamma) = -integral of Gamma over the loop; the branch is the one
/// produced by the integral itself, so it varies continuously with the spec.
cplx log_holonomy(const Connection& connection, const LoopPath& loop, const Quadrature& q = {});
cplx holonomy(const AffineSurfaceSpec& spec, const LoopPath& loop, const Quadrature& q = {});

/// Winding number of the loop's velocity. Exact for circles and lattice
/// segments; central differences plus continuous_log for sampled loops.
int velocity_winding(const LoopPath& loop);

/// tau(gamma) = wind(gamma') - (1 / 2 pi i) integral of Gamma over gamma.
cplx turning_number(const Connection& connection, const LoopPath& loop, const Quadrature& q = {});
cplx turning_number(const AffineSurfaceSpec& spec, const LoopPath& loop, const Quadrature& q = {});

struct NamedLoop {
  std::string id;
  LoopPath loop;
};

/// Positive circles around every cone point ("c0", "c1", ...) followed, at
/// genus 1, by the lattice loops "a" and "b" through a common basepoint
/// chosen away from all cone points.
std::vector<NamedLoop> standard_basis(const AffineSurfaceSpec& spec);

struct HolonomyReport {
  std::vector<std::string> ids;
  std::vector<cplx> chi;
  std::vector<cplx> tau;
  cplx cone_product{1.0, 0.0};  // product of chi over the cone loops
  bool consistent = false;
};

/// Cone loops are recognized by id prefix "c".
HolonomyReport character_on_basis(const AffineSurfaceSpec& spec,
                                  const std::vector<NamedLoop>& basis,
                                  const Quadrature& q = {});

enum class TranslationType { FiniteArea, InfiniteArea, NotTranslation };

std::string_view to_string(TranslationType type) noexcept;
TranslationType is_translation_surface(const AffineSurfaceSpec& spec, const Quadrature& q = {});
bool has_trivial_holonomy(const HolonomyReport& report, double tol = kHolonomyTol);

}  // namespace holo
