#pragma once

// Rank-1 local systems on triangulated compact surfaces with boundary.
//
// Edges are the sorted vertex pairs (u < v), indexed in lexicographic order.
// A character stores one transport value per edge: parallel transport from
// u to v multiplies by g_e, from v to u by 1 / g_e. Cochains are valued at
// the first vertex of each (sorted) simplex.

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "holo/numerics.hpp"

namespace holo {

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;  // u < v
};

/// Closed vertex path naming a class in H_1 (a, b, a1, b2, d0, ...).
struct Generator {
  std::string name;
  std::vector<std::size_t> vertices;  // first == last
};

class SurfaceComplex {
 public:
  /// Triangles must be coherently oriented; boundary_cycles lists edge
  /// indices of each boundary circle. Throws InvalidComplex on any defect.
  static SurfaceComplex from_triangles(std::size_t num_vertices,
                                       std::vector<std::array<std::size_t, 3>> triangles,
                                       const std::vector<std::vector<std::size_t>>& boundary_cycles);

  /// Closed genus-g surface (g <= 2) with the interiors of b vertex-disjoint
  /// triangles removed. Carries generators a/b (or a1, b1, a2, b2) and d0..
  static SurfaceComplex standard(int genus, int boundaries);

  std::size_t num_vertices() const noexcept { return num_vertices_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<std::array<std::size_t, 3>>& triangles() const noexcept { return triangles_; }
  std::optional<std::size_t> edge_index(std::size_t a, std::size_t b) const;
  const std::vector<std::vector<std::size_t>>& boundary_cycles() const noexcept { return boundary_edges_; }
  bool vertex_on_boundary(std::size_t v) const { return vertex_boundary_[v]; }
  bool edge_on_boundary(std::size_t e) const { return edge_boundary_[e]; }

  int euler_characteristic() const noexcept;
  int genus() const noexcept { return genus_; }
  int num_boundaries() const noexcept { return static_cast<int>(boundary_edges_.size()); }
  const std::vector<Generator>& generators() const noexcept { return generators_; }
  /// For a refined complex: the old vertex each new vertex is attached to.
  const std::vector<std::size_t>& parent_vertex() const noexcept { return parent_; }

  /// One barycentric subdivision; generators and boundary follow.
  SurfaceComplex barycentric() const;

 private:
  void build();

  std::size_t num_vertices_ = 0;
  std::vector<std::array<std::size_t, 3>> triangles_;
  std::vector<Edge> edges_;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_lookup_;
  std::vector<std::vector<std::size_t>> boundary_edges_;
  std::vector<std::vector<std::size_t>> boundary_loops_;  // induced orientation, closed
  std::vector<bool> vertex_boundary_;
  std::vector<bool> edge_boundary_;
  std::vector<Generator> generators_;
  std::vector<std::size_t> parent_;
  int genus_ = 0;
};

class Character {
 public:
  Character() = default;

  /// Full edge values; throws NonFlatCharacter unless every triangle closes
  /// to 1 within 1e-10, InvalidSpec on zero or non-finite values.
  static Character from_edge_values(const SurfaceComplex& k, std::vector<cplx> values);
  static Character trivial(const SurfaceComplex& k);
  /// Values on the free edges of the tree-cotree split (free_edges(k)).
  /// Throws MissingGeneratorValue if one is absent.
  static Character from_free_edges(const SurfaceComplex& k, const std::map<std::size_t, cplx>& values);
  /// Values on named generators; throws MissingGeneratorValue when they do
  /// not determine the character and NonFlatCharacter when inconsistent.
  static Character from_generators(const SurfaceComplex& k, const std::map<std::string, cplx>& values);

  const std::vector<cplx>& edge_values() const noexcept { return values_; }
  /// Transport from vertex a to an adjacent (or equal) vertex b.
  cplx transport(const SurfaceComplex& k, std::size_t a, std::size_t b) const;
  /// Product of transports along a closed vertex path.
  cplx along(const SurfaceComplex& k, const std::vector<std::size_t>& path) const;

  Character inverse() const;
  Character conjugate() const;
  bool is_unitary(double tol = 1e-12) const;
  /// Pushes the character to k.barycentric() (fine must come from coarse).
  Character refined(const SurfaceComplex& coarse, const SurfaceComplex& fine) const;

 private:
  std::vector<cplx> values_;
};

/// Edges outside both the spanning tree and the dual cotree; there are
/// 2g + b - 1 of them when b > 0 and 2g when b = 0.
std::vector<std::size_t> free_edges(const SurfaceComplex& k);

struct CohomologyDims {
  int h0 = 0;
  int h1 = 0;
  int h2 = 0;
  /// Orthonormal harmonic representatives of H^1 as edge cochains (columns).
  Eigen::MatrixXcd h1_basis;
};

CohomologyDims twisted_cohomology(const SurfaceComplex& k, const Character& chi);
/// Relative cohomology of (K, boundary): cochains vanishing on the boundary.
CohomologyDims compact_support_cohomology(const SurfaceComplex& k, const Character& chi);

struct PairingReport {
  Eigen::MatrixXcd matrix;  // i * sum over triangles of phi cup conj(psi)
  int positive = 0;
  int negative = 0;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double hermitian_defect = 0.0;  // max |H - H^*|
};

inline constexpr double kPairingMargin = 1e-8;
inline constexpr double kPairingFloor = 1e-10;

/// Throws NonUnitaryCharacter unless |g_e| = 1, DegeneratePairing when
/// sigma_min <= 1e-8 sigma_max or sigma_max <= 1e-10 on the orthonormal
/// harmonic basis. An empty H^1_c gives an empty matrix.
PairingReport veech_pairing(const SurfaceComplex& k, const Character& chi);

}  // namespace holo
