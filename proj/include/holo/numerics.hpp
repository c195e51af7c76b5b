#pragma once

// Contour quadrature, branch-tracked logarithms and Cauchy residues.

#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace holo {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kTwoPiI{0.0, 2.0 * std::numbers::pi};

struct Quadrature {
  double abs_tol = 1e-10;
  int max_refinements = 40;

  /// Throws holo::Error(InvalidSpec) when abs_tol <= 0 or the refinement
  /// budget is negative.
  void validate() const;
};

struct LineSegment {
  cplx from;
  cplx to;
};

/// Circular arc z(t) = center + radius * exp(i * (theta0 + t * (theta1 - theta0))).
/// theta1 < theta0 runs clockwise.
struct ArcSegment {
  cplx center;
  double radius = 1.0;
  double theta0 = 0.0;
  double theta1 = 2.0 * std::numbers::pi;
};

using Segment = std::variant<LineSegment, ArcSegment>;

cplx segment_point(const Segment& seg, double t);
/// dz/dt of the unit-interval parametrization.
cplx segment_velocity(const Segment& seg, double t);

/// Piecewise path made of line segments and circular arcs.
class Path {
 public:
  Path() = default;
  explicit Path(std::vector<Segment> segments) : segments_(std::move(segments)) {}

  static Path polyline(std::span<const cplx> points);

  const std::vector<Segment>& segments() const noexcept { return segments_; }
  bool empty() const noexcept { return segments_.empty(); }
  cplx start() const;
  cplx end() const;

  Path& append(const Segment& seg);
  Path& append(const Path& other);
  Path reversed() const;

  /// Points spaced at most `spacing` apart along the path, both ends included.
  std::vector<cplx> sample(double spacing) const;
  /// Smallest distance from the path to p (exact for lines and arcs).
  double distance_to(cplx p) const;

 private:
  std::vector<Segment> segments_;
};

/// Closed loop used for holonomy and turning numbers.
class LoopPath {
 public:
  enum class Kind { Circle, Samples, LatticeA, LatticeB };

  static LoopPath circle(cplx center, double radius, int orientation = 1);
  /// Throws InvalidSpec unless the list is closed (first == last) with at
  /// least 16 points.
  static LoopPath samples(std::vector<cplx> points);
  static LoopPath lattice_a(cplx basepoint);
  static LoopPath lattice_b(cplx basepoint);
  // Lattice loops run basepoint -> basepoint + period for orientation +1
  // and the reverse for -1.

  Kind kind() const noexcept { return kind_; }
  cplx center() const noexcept { return center_; }
  double radius() const noexcept { return radius_; }
  int orientation() const noexcept { return orientation_; }
  const std::vector<cplx>& points() const noexcept { return points_; }
  cplx basepoint() const noexcept;

  /// Geometric path; `tau` is the second lattice period and is only read by
  /// lattice_b loops.
  Path trace(cplx tau = {0.0, 1.0}) const;
  LoopPath reversed() const;

 private:
  Kind kind_ = Kind::Circle;
  cplx center_{};
  double radius_ = 1.0;
  int orientation_ = 1;
  std::vector<cplx> points_;
  cplx basepoint_{};
};

using ScalarIntegrand = std::function<cplx(cplx)>;
/// Evaluates the integrand at every node at once; out.size() == z.size().
using BatchIntegrand = std::function<void(std::span<const cplx> z, std::span<cplx> out)>;

/// Composite 20-point Gauss-Legendre with adaptive bisection.
cplx integrate(const BatchIntegrand& f, const Path& path, const Quadrature& q = {});
cplx integrate(const ScalarIntegrand& f, const Path& path, const Quadrature& q = {});
cplx integrate(const ScalarIntegrand& f, const LoopPath& loop, const Quadrature& q = {},
               cplx tau = {0.0, 1.0});

/// Continuous branch of log along a sequence of nonzero values. Throws
/// BranchJump when two successive arguments differ by pi or more.
std::vector<cplx> continuous_log(std::span<const cplx> values);

/// (1 / 2 pi i) times the integral of f over the positive circle |z - p| = radius.
cplx cauchy_residue(const ScalarIntegrand& f, cplx p, double radius,
                    const Quadrature& q = {});

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre_20();

}  // namespace holo
