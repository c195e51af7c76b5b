#pragma once

// Finite-difference Jacobians of the holonomy and residue maps over
// parametrized families, numerical ranks, and isoresidual leaf steps.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "holo/holonomy.hpp"
#include "holo/residues.hpp"
#include "holo/surface.hpp"

namespace holo {

/// One complex parameter t of a family.
///   move_point j:      c_j += t
///   order_pair (p, m): m_p += t, m_m -= t
///   lambda:            lambda += t   (genus 1)
///   tau:               tau += t      (genus 1)
struct Direction {
  enum class Kind { MovePoint, OrderPair, Lambda, Tau };
  Kind kind = Kind::MovePoint;
  std::size_t index = 0;
  std::size_t plus = 0;
  std::size_t minus = 0;

  static Direction move_point(std::size_t j) { return {Kind::MovePoint, j, 0, 0}; }
  static Direction order_pair(std::size_t p, std::size_t m) { return {Kind::OrderPair, 0, p, m}; }
  static Direction lambda() { return {Kind::Lambda, 0, 0, 0}; }
  static Direction tau() { return {Kind::Tau, 0, 0, 0}; }
  bool operator==(const Direction&) const = default;
};

std::string_view to_string(Direction::Kind kind) noexcept;

struct SpecFamily {
  AffineSurfaceSpec base;
  std::vector<Direction> directions;
};

/// Throws InvalidDirection for out-of-range indices, order pairs with
/// plus == minus, and lambda/tau at genus 0; the base must be valid.
void validate_family(const SpecFamily& family);

/// base moved by sum_i t_i * direction_i.
AffineSurfaceSpec apply_directions(const AffineSurfaceSpec& base, const std::vector<Direction>& directions,
                                   std::span<const cplx> t);

/// Chart family for leaf computations: genus 0 moves every point after the
/// first three, genus 1 moves every point after the first and adds lambda
/// and tau; both add order pairs among the non-integral cone points.
SpecFamily leaf_family(const AffineSurfaceSpec& spec);

struct DeformationOptions {
  double step = 1e-5;      // central-difference step per parameter
  double rank_tol = 1e-6;  // relative to the largest singular value
  int jobs = 1;            // threads evaluating Jacobian columns
  Quadrature q{1e-12, 40};
};

enum class Verdict { Submersion, RankDeficient };
std::string_view to_string(Verdict verdict) noexcept;

struct RankReport {
  std::vector<std::string> rows;  // loop ids, then "r<i>/r<k>" chart coordinates
  Eigen::MatrixXcd jacobian;      // rows x directions
  Eigen::VectorXd singular_values;
  int rank = 0;
  int target_dim = 0;  // independent target coordinates
  int hol_rank = 0;
  int res_rank = 0;
  Eigen::MatrixXcd kernel;  // orthonormal null vectors (columns)
  Verdict verdict = Verdict::RankDeficient;
};

/// Jacobian of log chi (continued along the step, never the principal
/// branch) on the basis loops. Throws StepCollision when a loop passes
/// within twice the step of a cone point.
RankReport hol_jacobian(const SpecFamily& family, const std::vector<NamedLoop>& basis,
                        const DeformationOptions& opts = {});

/// Adds the affine chart of the projective residue tuple (divided by the
/// coordinate of largest modulus at the base). Throws NotInAdmissibleLocus
/// for translation surfaces and specs without integral poles, and
/// InvalidDirection for directions changing an integral pole's order.
RankReport hol_res_jacobian(const SpecFamily& family, const std::vector<NamedLoop>& basis,
                            const ArcTree& tree, const DeformationOptions& opts = {});

struct LeafStep {
  AffineSurfaceSpec spec;
  ArcTree tree;
  int newton_iterations = 0;
  double hol_drift = 0.0;  // max |delta log chi| over the basis
  double res_drift = 0.0;  // Fubini-Study distance of residue tuples
};

inline constexpr double kLeafTol = 1e-7;

/// One step of length `step` along the isoresidual leaf through `spec`
/// (kernel direction of hol_res_jacobian on leaf_family(spec), phase fixed
/// so its largest entry is real positive), followed by at most 10 Newton
/// corrections. Throws ZeroKernel and NewtonDivergence.
LeafStep leaf_step(const AffineSurfaceSpec& spec, const ArcTree& tree, double step,
                   const DeformationOptions& opts = {});

struct LeafWalk {
  std::vector<LeafStep> steps;
  double hol_drift = 0.0;  // max |chi_k - chi_0| over basis ids, all k
  double res_drift = 0.0;  // max Fubini-Study distance to the start
};

/// `count` composed leaf steps; drifts are measured against the start.
LeafWalk leaf_walk(const AffineSurfaceSpec& spec, const ArcTree& tree, double step, int count,
                   const DeformationOptions& opts = {});

}  // namespace holo
