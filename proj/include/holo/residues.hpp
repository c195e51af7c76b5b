#pragma once

// Residues of flat one-forms at integral poles, with branches fixed by a tree
// of arcs rooted at one integral pole.

#include <cstddef>
#include <optional>
#include <vector>

#include "holo/numerics.hpp"
#include "holo/surface.hpp"

namespace holo {

struct TreeArc {
  std::size_t to_index = 0;
  std::vector<cplx> points;  // from the root position to the pole position
};

struct ArcTree {
  std::size_t root_index = 0;
  std::vector<TreeArc> arcs;
};

struct ResidueTuple {
  std::vector<std::size_t> poles;  // cone point indices
  std::vector<cplx> values;
  bool projective = false;
};

/// Indices of cone points whose order is a negative integer.
std::vector<std::size_t> integral_poles(const AffineSurfaceSpec& spec);

/// Throws InvalidTree unless the tree's root and arc ends are the integral
/// poles, every other integral pole has exactly one arc, and arcs stay off
/// every other cone point. Endpoints within 1e-6 are snapped exactly.
ArcTree validated_tree(const AffineSurfaceSpec& spec, ArcTree tree);

/// Straight or dog-leg arcs from the first integral pole to the others,
/// kept clear of the remaining cone points.
ArcTree default_tree(const AffineSurfaceSpec& spec);

/// Moves every arc with its endpoints from `from` to `to` (each point is
/// displaced by the arc-length interpolation of the endpoint displacements).
ArcTree adapt_tree(const ArcTree& tree, const AffineSurfaceSpec& from, const AffineSurfaceSpec& to);

/// Radius used for the normalization point and the residue circles.
double residue_radius(const AffineSurfaceSpec& spec);

/// Where the flat form is normalized to 1: the first crossing of the first
/// arc with the circle of residue_radius about the root.
cplx normalization_point(const AffineSurfaceSpec& spec, const ArcTree& tree);

/// Path from the normalization point near the root to the residue circle of
/// `pole` (radius `radius`). The flat form is normalized to 1 at its start.
Path transport_path(const AffineSurfaceSpec& spec, const ArcTree& tree, std::size_t pole,
                    double radius);

/// Residue at `pole` of the flat form continued along the tree. Throws
/// NotIntegralPole for other cone points.
cplx flat_residue_at(const AffineSurfaceSpec& spec, const ArcTree& tree, std::size_t pole,
                     std::optional<double> radius = std::nullopt, const Quadrature& q = {});

/// Residues at all integral poles with the common normalization (affine).
ResidueTuple residues(const AffineSurfaceSpec& spec, const ArcTree& tree, const Quadrature& q = {});

/// Projectivized residues, scaled so the first nonzero coordinate is 1.
/// Throws AllResiduesZero when no coordinate is nonzero.
ResidueTuple res_gamma(const AffineSurfaceSpec& spec, const ArcTree& tree, const Quadrature& q = {});

/// Sum of residues of the global flat form over all poles. Throws
/// NotTranslationSurface unless the holonomy is trivial.
cplx residue_sum_check(const AffineSurfaceSpec& spec, const Quadrature& q = {});

/// Fubini-Study distance between two points of projective space.
double fubini_study(const std::vector<cplx>& u, const std::vector<cplx>& v);

}  // namespace holo
