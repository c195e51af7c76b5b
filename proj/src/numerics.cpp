#include "holo/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "holo/error.hpp"
#include "holo/kernels.hpp"

namespace holo {

void Quadrature::validate() const {
  if (!(abs_tol > 0.0) || !std::isfinite(abs_tol)) {
    throw Error(ErrorCode::InvalidSpec, "quadrature abs_tol must be positive");
  }
  if (max_refinements < 0) {
    throw Error(ErrorCode::InvalidSpec, "quadrature max_refinements must be >= 0");
  }
}

// ---------------------------------------------------------------- segments

cplx segment_point(const Segment& seg, double t) {
  if (const auto* line = std::get_if<LineSegment>(&seg)) {
    return line->from + t * (line->to - line->from);
  }
  const auto& arc = std::get<ArcSegment>(seg);
  return arc.center + std::polar(arc.radius, arc.theta0 + t * (arc.theta1 - arc.theta0));
}

cplx segment_velocity(const Segment& seg, double t) {
  if (const auto* line = std::get_if<LineSegment>(&seg)) {
    return line->to - line->from;
  }
  const auto& arc = std::get<ArcSegment>(seg);
  const double sweep = arc.theta1 - arc.theta0;
  return cplx(0.0, sweep) * std::polar(arc.radius, arc.theta0 + t * sweep);
}

namespace {

double segment_length(const Segment& seg) {
  if (const auto* line = std::get_if<LineSegment>(&seg)) return std::abs(line->to - line->from);
  const auto& arc = std::get<ArcSegment>(seg);
  return arc.radius * std::abs(arc.theta1 - arc.theta0);
}

double distance_to_segment(const Segment& seg, cplx p) {
  if (const auto* line = std::get_if<LineSegment>(&seg)) {
    const cplx d = line->to - line->from;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(p - line->from);
    const double t = std::clamp(((p - line->from) * std::conj(d)).real() / len2, 0.0, 1.0);
    return std::abs(p - (line->from + t * d));
  }
  const auto& arc = std::get<ArcSegment>(seg);
  const double lo = std::min(arc.theta0, arc.theta1);
  const double hi = std::max(arc.theta0, arc.theta1);
  const cplx rel = p - arc.center;
  if (hi - lo >= 2.0 * kPi || std::abs(rel) == 0.0) {
    return std::abs(std::abs(rel) - arc.radius);
  }
  double angle = std::arg(rel);
  // Bring the angle into [lo, lo + 2 pi).
  angle = lo + std::fmod(std::fmod(angle - lo, 2.0 * kPi) + 2.0 * kPi, 2.0 * kPi);
  if (angle <= hi) return std::abs(std::abs(rel) - arc.radius);
  return std::min(std::abs(p - segment_point(seg, 0.0)), std::abs(p - segment_point(seg, 1.0)));
}

}  // namespace

// -------------------------------------------------------------------- Path

Path Path::polyline(std::span<const cplx> points) {
  Path path;
  for (std::size_t k = 1; k < points.size(); ++k) {
    path.segments_.push_back(LineSegment{points[k - 1], points[k]});
  }
  return path;
}

cplx Path::start() const {
  if (segments_.empty()) throw Error(ErrorCode::InvalidSpec, "empty path has no start");
  return segment_point(segments_.front(), 0.0);
}

cplx Path::end() const {
  if (segments_.empty()) throw Error(ErrorCode::InvalidSpec, "empty path has no end");
  return segment_point(segments_.back(), 1.0);
}

Path& Path::append(const Segment& seg) {
  segments_.push_back(seg);
  return *this;
}

Path& Path::append(const Path& other) {
  segments_.insert(segments_.end(), other.segments_.begin(), other.segments_.end());
  return *this;
}

Path Path::reversed() const {
  Path out;
  for (auto it = segments_.rbegin(); it != segments_.rend(); ++it) {
    if (const auto* line = std::get_if<LineSegment>(&*it)) {
      out.segments_.push_back(LineSegment{line->to, line->from});
    } else {
      auto arc = std::get<ArcSegment>(*it);
      std::swap(arc.theta0, arc.theta1);
      out.segments_.push_back(arc);
    }
  }
  return out;
}

std::vector<cplx> Path::sample(double spacing) const {
  std::vector<cplx> out;
  if (segments_.empty()) return out;
  out.push_back(start());
  for (const auto& seg : segments_) {
    const auto n = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(segment_length(seg) / spacing)));
    for (std::size_t k = 1; k <= n; ++k) {
      out.push_back(segment_point(seg, static_cast<double>(k) / static_cast<double>(n)));
    }
  }
  return out;
}

double Path::distance_to(cplx p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& seg : segments_) best = std::min(best, distance_to_segment(seg, p));
  return best;
}

// ---------------------------------------------------------------- LoopPath

LoopPath LoopPath::circle(cplx center, double radius, int orientation) {
  if (!(radius > 0.0) || (orientation != 1 && orientation != -1)) {
    throw Error(ErrorCode::InvalidSpec, "circle needs radius > 0 and orientation +-1");
  }
  LoopPath loop;
  loop.kind_ = Kind::Circle;
  loop.center_ = center;
  loop.radius_ = radius;
  loop.orientation_ = orientation;
  loop.basepoint_ = center + radius;
  return loop;
}

LoopPath LoopPath::samples(std::vector<cplx> points) {
  if (points.size() < 16) {
    throw Error(ErrorCode::InvalidSpec, "sampled loop needs at least 16 points");
  }
  if (points.front() != points.back()) {
    throw Error(ErrorCode::InvalidSpec, "sampled loop must be closed (first == last)");
  }
  LoopPath loop;
  loop.kind_ = Kind::Samples;
  loop.basepoint_ = points.front();
  loop.points_ = std::move(points);
  return loop;
}

LoopPath LoopPath::lattice_a(cplx basepoint) {
  LoopPath loop;
  loop.kind_ = Kind::LatticeA;
  loop.basepoint_ = basepoint;
  return loop;
}

LoopPath LoopPath::lattice_b(cplx basepoint) {
  LoopPath loop;
  loop.kind_ = Kind::LatticeB;
  loop.basepoint_ = basepoint;
  return loop;
}

cplx LoopPath::basepoint() const noexcept { return basepoint_; }

Path LoopPath::trace(cplx tau) const {
  switch (kind_) {
    case Kind::Circle:
      return Path({ArcSegment{center_, radius_, 0.0, orientation_ * 2.0 * kPi}});
    case Kind::Samples:
      return Path::polyline(points_);
    case Kind::LatticeA:
    case Kind::LatticeB: {
      const cplx period = kind_ == Kind::LatticeA ? cplx(1.0, 0.0) : tau;
      Path path({LineSegment{basepoint_, basepoint_ + period}});
      return orientation_ > 0 ? path : path.reversed();
    }
  }
  return {};
}

LoopPath LoopPath::reversed() const {
  LoopPath out = *this;
  out.orientation_ = -orientation_;
  if (kind_ == Kind::Samples) {
    std::reverse(out.points_.begin(), out.points_.end());
    out.orientation_ = 1;
  }
  return out;
}

// -------------------------------------------------------------- quadrature

const GaussRule& gauss_legendre_20() {
  static const GaussRule rule = [] {
    constexpr int n = 20;
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
      double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = pk;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      r.nodes[i] = x;
      r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
  }();
  return rule;
}

namespace {

constexpr std::size_t kRuleSize = 20;

struct PanelSum {
  cplx value;
  double magnitude;  // sum of w |f dz|, the roundoff scale of the panel
};

class AdaptiveIntegrator {
 public:
  AdaptiveIntegrator(const BatchIntegrand& f, const Quadrature& q) : f_(f), q_(q) {}

  cplx run(const Segment& seg, double tol) {
    std::size_t panels = 1;
    if (const auto* arc = std::get_if<ArcSegment>(&seg)) {
      panels = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::ceil(std::abs(arc->theta1 - arc->theta0) / (kPi / 4.0))));
    }
    cplx total{};
    for (std::size_t p = 0; p < panels; ++p) {
      const double a = static_cast<double>(p) / panels;
      const double b = static_cast<double>(p + 1) / panels;
      total += refine(seg, a, b, panel(seg, a, b).value, tol / panels, 0);
    }
    return total;
  }

 private:
  PanelSum panel(const Segment& seg, double a, double b) {
    const auto& rule = gauss_legendre_20();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (std::size_t k = 0; k < kRuleSize; ++k) {
      const double t = mid + half * rule.nodes[k];
      z_[k] = segment_point(seg, t);
      dz_[k] = segment_velocity(seg, t) * half;
    }
    f_(z_, fz_);
    double magnitude = 0.0;
    for (std::size_t k = 0; k < kRuleSize; ++k) {
      if (!std::isfinite(fz_[k].real()) || !std::isfinite(fz_[k].imag())) {
        std::ostringstream msg;
        msg << "integrand not finite at z = " << z_[k];
        throw Error(ErrorCode::NonFiniteEvaluation, msg.str());
      }
      magnitude += rule.weights[k] * std::abs(fz_[k] * dz_[k]);
    }
    return {kernels::weighted_sum(rule.weights, fz_, dz_), magnitude};
  }

  cplx refine(const Segment& seg, double a, double b, cplx whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const PanelSum left = panel(seg, a, m);
    const PanelSum right = panel(seg, m, b);
    const cplx halves = left.value + right.value;
    const double floor = 1e3 * std::numeric_limits<double>::epsilon() *
                         (left.magnitude + right.magnitude);
    if (std::abs(whole - halves) <= std::max(tol, floor)) return halves;
    if (depth >= q_.max_refinements) {
      std::ostringstream msg;
      msg << "quadrature did not reach " << q_.abs_tol << " after "
          << q_.max_refinements << " refinements";
      throw Error(ErrorCode::ToleranceNotReached, msg.str());
    }
    return refine(seg, a, m, left.value, 0.5 * tol, depth + 1) +
           refine(seg, m, b, right.value, 0.5 * tol, depth + 1);
  }

  const BatchIntegrand& f_;
  const Quadrature& q_;
  std::array<cplx, kRuleSize> z_{};
  std::array<cplx, kRuleSize> dz_{};
  std::array<cplx, kRuleSize> fz_{};
};

}  // namespace

cplx integrate(const BatchIntegrand& f, const Path& path, const Quadrature& q) {
  q.validate();
  if (path.empty()) return {};
  AdaptiveIntegrator integrator(f, q);
  const double tol = q.abs_tol / static_cast<double>(path.segments().size());
  cplx total{};
  for (const auto& seg : path.segments()) total += integrator.run(seg, tol);
  return total;
}

cplx integrate(const ScalarIntegrand& f, const Path& path, const Quadrature& q) {
  const BatchIntegrand batch = [&f](std::span<const cplx> z, std::span<cplx> out) {
    for (std::size_t k = 0; k < z.size(); ++k) out[k] = f(z[k]);
  };
  return integrate(batch, path, q);
}

cplx integrate(const ScalarIntegrand& f, const LoopPath& loop, const Quadrature& q, cplx tau) {
  return integrate(f, loop.trace(tau), q);
}

std::vector<cplx> continuous_log(std::span<const cplx> values) {
  std::vector<cplx> out;
  out.reserve(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] == cplx{}) {
      throw Error(ErrorCode::BranchJump, "continuous_log: zero value at index " + std::to_string(k));
    }
    if (k == 0) {
      out.push_back(std::log(values[0]));
      continue;
    }
    const double step = std::arg(values[k] / values[k - 1]);
    if (std::abs(step) >= kPi) {
      throw Error(ErrorCode::BranchJump,
                  "continuous_log: argument jump of pi at index " + std::to_string(k));
    }
    out.push_back(out.back() +
                  cplx(std::log(std::abs(values[k]) / std::abs(values[k - 1])), step));
  }
  return out;
}

cplx cauchy_residue(const ScalarIntegrand& f, cplx p, double radius, const Quadrature& q) {
  return integrate(f, LoopPath::circle(p, radius, 1), q) / kTwoPiI;
}

}  // namespace holo
