#include "holo/residues.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "holo/holonomy.hpp"

namespace holo {

namespace {

constexpr double kSnapTol = 1e-6;

// Cone point positions plus lattice translates near the fundamental domain.
struct Instance {
  std::size_t index;
  long m;
  long n;
  cplx z;
};

std::vector<Instance> cone_instances(const AffineSurfaceSpec& spec) {
  std::vector<Instance> out;
  const long reach = spec.genus == 1 ? 2 : 0;
  for (std::size_t i = 0; i < spec.cone_points.size(); ++i) {
    for (long m = -reach; m <= reach; ++m) {
      for (long n = -reach; n <= reach; ++n) {
        out.push_back({i, m, n,
                       spec.cone_points[i].position + static_cast<double>(m) +
                           static_cast<double>(n) * spec.tau});
      }
    }
  }
  return out;
}

double point_segment_distance(cplx p, cplx a, cplx b) {
  const cplx d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool segments_intersect(cplx a, cplx b, cplx c, cplx d) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 &&
         d4 != 0;
}

// Parameter t in [0, 1] where |a + t (b - a) - c| = r. `leaving` picks the
// larger root (crossing outward), otherwise the smaller (crossing inward).
double circle_crossing(cplx a, cplx b, cplx c, double r, bool leaving) {
  const cplx u = a - c;
  const cplx d = b - a;
  const double A = std::norm(d);
  const double B = (u * std::conj(d)).real();
  const double C = std::norm(u) - r * r;
  const double disc = std::sqrt(std::max(0.0, B * B - A * C));
  const double t = leaving ? (-B + disc) / A : (-B - disc) / A;
  return std::clamp(t, 0.0, 1.0);
}

// Point where the polyline first leaves the disk |z - c| < r, and the index
// of the segment containing it.
std::pair<cplx, std::size_t> first_exit(const std::vector<cplx>& pts, cplx c, double r) {
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    if (std::abs(pts[k] - c) < r && std::abs(pts[k + 1] - c) >= r) {
      const double t = circle_crossing(pts[k], pts[k + 1], c, r, true);
      return {pts[k] + t * (pts[k + 1] - pts[k]), k};
    }
  }
  throw Error(ErrorCode::InvalidTree, "tree arc never leaves the root's normalization circle");
}

std::pair<cplx, std::size_t> first_entry(const std::vector<cplx>& pts, cplx c, double r) {
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    if (std::abs(pts[k] - c) > r && std::abs(pts[k + 1] - c) <= r) {
      const double t = circle_crossing(pts[k], pts[k + 1], c, r, false);
      return {pts[k] + t * (pts[k + 1] - pts[k]), k};
    }
  }
  throw Error(ErrorCode::InvalidTree, "tree arc never reaches the pole's residue circle");
}

const TreeArc* arc_to(const ArcTree& tree, std::size_t pole) {
  for (const auto& arc : tree.arcs) {
    if (arc.to_index == pole) return &arc;
  }
  return nullptr;
}

double nearest_other_cone(const AffineSurfaceSpec& spec, std::size_t index) {
  double best = std::numeric_limits<double>::infinity();
  const cplx p = spec.cone_points[index].position;
  for (const auto& inst : cone_instances(spec)) {
    if (inst.index == index && inst.m == 0 && inst.n == 0) continue;
    best = std::min(best, std::abs(inst.z - p));
  }
  return best;
}

// Smallest distance from the polyline to a cone point instance other than
// the arc's own endpoints.
double arc_clearance(const AffineSurfaceSpec& spec, const std::vector<cplx>& pts,
                     std::size_t from, std::size_t to) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& inst : cone_instances(spec)) {
    if ((inst.index == from || inst.index == to) && inst.m == 0 && inst.n == 0) continue;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      best = std::min(best, point_segment_distance(inst.z, pts[k], pts[k + 1]));
    }
  }
  return best;
}

bool arcs_cross(const std::vector<cplx>& a, const std::vector<cplx>& b, cplx root, double skip) {
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    if (std::abs(a[i] - root) < skip && std::abs(a[i + 1] - root) < skip) continue;
    for (std::size_t j = 0; j + 1 < b.size(); ++j) {
      if (std::abs(b[j] - root) < skip && std::abs(b[j + 1] - root) < skip) continue;
      if (segments_intersect(a[i], a[i + 1], b[j], b[j + 1])) return true;
    }
  }
  return false;
}

}  // namespace

std::vector<std::size_t> integral_poles(const AffineSurfaceSpec& spec) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < spec.cone_points.size(); ++j) {
    if (is_integral_pole(spec.cone_points[j].order)) out.push_back(j);
  }
  return out;
}

double residue_radius(const AffineSurfaceSpec& spec) {
  const double sep = min_cone_separation(spec);
  return std::isfinite(sep) ? 0.1 * sep : 0.1;
}

ArcTree validated_tree(const AffineSurfaceSpec& spec, ArcTree tree) {
  require_valid(spec);
  const auto poles = integral_poles(spec);
  const auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidTree, msg); };
  if (std::find(poles.begin(), poles.end(), tree.root_index) == poles.end()) {
    fail("tree root " + std::to_string(tree.root_index) + " is not an integral pole");
  }
  std::set<std::size_t> targets;
  const cplx root = spec.cone_points[tree.root_index].position;
  for (auto& arc : tree.arcs) {
    if (std::find(poles.begin(), poles.end(), arc.to_index) == poles.end() ||
        arc.to_index == tree.root_index) {
      fail("arc end " + std::to_string(arc.to_index) + " is not a non-root integral pole");
    }
    if (!targets.insert(arc.to_index).second) {
      fail("two arcs end at pole " + std::to_string(arc.to_index));
    }
    if (arc.points.size() < 2) fail("tree arc needs at least two points");
    const cplx end = spec.cone_points[arc.to_index].position;
    if (std::abs(arc.points.front() - root) > kSnapTol || std::abs(arc.points.back() - end) > kSnapTol) {
      fail("tree arc endpoints do not match the root and its pole");
    }
    arc.points.front() = root;
    arc.points.back() = end;
    if (arc_clearance(spec, arc.points, tree.root_index, arc.to_index) < 1e-9) {
      fail("tree arc to pole " + std::to_string(arc.to_index) + " runs through a cone point");
    }
  }
  if (targets.size() + 1 != poles.size()) fail("tree does not reach every integral pole");
  const double skip = residue_radius(spec);
  for (std::size_t i = 0; i < tree.arcs.size(); ++i) {
    for (std::size_t j = i + 1; j < tree.arcs.size(); ++j) {
      if (arcs_cross(tree.arcs[i].points, tree.arcs[j].points, root, skip)) {
        fail("tree arcs cross away from the root");
      }
    }
  }
  return tree;
}

ArcTree default_tree(const AffineSurfaceSpec& spec) {
  require_valid(spec);
  const auto poles = integral_poles(spec);
  if (poles.empty()) throw Error(ErrorCode::InvalidTree, "spec has no integral pole");
  ArcTree tree;
  tree.root_index = poles.front();
  const cplx root = spec.cone_points[tree.root_index].position;
  const double sep = min_cone_separation(spec);
  const double scale = std::isfinite(sep) ? sep : 1.0;
  const double clearance = 0.2 * scale;
  const double spacing = 0.02 * scale;
  for (std::size_t idx = 1; idx < poles.size(); ++idx) {
    const std::size_t pole = poles[idx];
    const cplx end = spec.cone_points[pole].position;
    const cplx perp = (end - root) * cplx(0.0, 1.0);
    bool placed = false;
    for (const double bend : {0.0, 0.35, -0.35, 0.7, -0.7, 1.1, -1.1}) {
      std::vector<cplx> corners = {root};
      if (bend != 0.0) corners.push_back(0.5 * (root + end) + bend * perp);
      corners.push_back(end);
      auto pts = Path::polyline(corners).sample(spacing);
      pts.front() = root;
      pts.back() = end;
      if (arc_clearance(spec, pts, tree.root_index, pole) < clearance) continue;
      const bool crosses = std::any_of(tree.arcs.begin(), tree.arcs.end(), [&](const TreeArc& other) {
        return arcs_cross(pts, other.points, root, residue_radius(spec));
      });
      if (crosses) continue;
      tree.arcs.push_back({pole, std::move(pts)});
      placed = true;
      break;
    }
    if (!placed) {
      throw Error(ErrorCode::InvalidTree,
                  "could not route a default arc to pole " + std::to_string(pole));
    }
  }
  return validated_tree(spec, tree);
}

ArcTree adapt_tree(const ArcTree& tree, const AffineSurfaceSpec& from, const AffineSurfaceSpec& to) {
  ArcTree out = tree;
  const cplx root_shift = to.cone_points.at(tree.root_index).position -
                          from.cone_points.at(tree.root_index).position;
  for (auto& arc : out.arcs) {
    const cplx end_shift =
        to.cone_points.at(arc.to_index).position - from.cone_points.at(arc.to_index).position;
    std::vector<double> cumulative(arc.points.size(), 0.0);
    for (std::size_t k = 1; k < arc.points.size(); ++k) {
      cumulative[k] = cumulative[k - 1] + std::abs(arc.points[k] - arc.points[k - 1]);
    }
    const double total = cumulative.back() > 0.0 ? cumulative.back() : 1.0;
    for (std::size_t k = 0; k < arc.points.size(); ++k) {
      const double s = cumulative[k] / total;
      arc.points[k] += (1.0 - s) * root_shift + s * end_shift;
    }
  }
  return validated_tree(to, out);
}

cplx normalization_point(const AffineSurfaceSpec& spec, const ArcTree& tree) {
  const double rho = residue_radius(spec);
  const cplx root = spec.cone_points.at(tree.root_index).position;
  if (tree.arcs.empty()) return root + rho;
  return first_exit(tree.arcs.front().points, root, rho).first;
}

Path transport_path(const AffineSurfaceSpec& spec, const ArcTree& tree, std::size_t pole,
                    double radius) {
  const double rho = residue_radius(spec);
  const cplx root = spec.cone_points.at(tree.root_index).position;
  const cplx w = normalization_point(spec, tree);

  Path path;
  if (pole == tree.root_index) {
    const cplx entry = root + radius * (w - root) / std::abs(w - root);
    if (std::abs(entry - w) > 0.0) path.append(LineSegment{w, entry});
    return path;
  }
  const TreeArc* arc = arc_to(tree, pole);
  if (arc == nullptr) {
    throw Error(ErrorCode::InvalidTree, "no tree arc reaches pole " + std::to_string(pole));
  }
  const auto [exit_point, exit_seg] = first_exit(arc->points, root, rho);
  const double theta_w = std::arg(w - root);
  double sweep = std::arg(exit_point - root) - theta_w;
  sweep = std::fmod(std::fmod(sweep, 2.0 * kPi) + 2.0 * kPi, 2.0 * kPi);
  if (sweep > 1e-14) path.append(ArcSegment{root, rho, theta_w, theta_w + sweep});

  std::vector<cplx> rest = {exit_point};
  rest.insert(rest.end(), arc->points.begin() + static_cast<long>(exit_seg) + 1, arc->points.end());
  const cplx target = spec.cone_points.at(pole).position;
  const auto [entry_point, entry_seg] = first_entry(rest, target, radius);
  std::vector<cplx> leg(rest.begin(), rest.begin() + static_cast<long>(entry_seg) + 1);
  leg.push_back(entry_point);
  path.append(Path::polyline(leg));
  return path;
}

cplx flat_residue_at(const AffineSurfaceSpec& spec, const ArcTree& tree, std::size_t pole,
                     std::optional<double> radius, const Quadrature& q) {
  require_valid(spec);
  if (pole >= spec.cone_points.size() || !is_integral_pole(spec.cone_points[pole].order)) {
    throw Error(ErrorCode::NotIntegralPole,
                "cone point " + std::to_string(pole) + " is not an integral pole");
  }
  const double r = radius.value_or(residue_radius(spec));
  if (!(r > 0.0) || r >= nearest_other_cone(spec, pole)) {
    throw Error(ErrorCode::InvalidSpec, "residue circle must lie in the punctured disk");
  }
  const Connection connection(spec);
  const Path path = transport_path(spec, tree, pole, r);
  const cplx log_entry = path.empty() ? cplx{} : -connection.integral(path, q);
  const cplx p = spec.cone_points[pole].position;
  const cplx entry = path.empty() ? normalization_point(spec, tree) : path.end();
  const double theta0 = std::arg(entry - p);

  // Periodic trapezoidal rule on the circle; the flat form is single-valued
  // there (local holonomy 1), and its values are chained arc by arc.
  cplx previous{};
  bool have_previous = false;
  for (std::size_t n = 32; n <= 4096; n *= 2) {
    cplx log_f = log_entry;
    cplx sum{};
    const double step = 2.0 * kPi / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double theta = theta0 + step * static_cast<double>(k);
      sum += std::exp(log_f) * std::polar(1.0, theta);
      log_f -= connection.integral(Path({ArcSegment{p, r, theta, theta + step}}), q);
    }
    if (std::abs(std::exp(log_f - log_entry) - 1.0) > 1e-9) {
      throw Error(ErrorCode::BranchJump, "flat form is not single-valued around the pole");
    }
    const cplx residue = sum * (r / static_cast<double>(n));
    if (have_previous && std::abs(residue - previous) <= q.abs_tol * std::max(1.0, std::abs(residue))) {
      return residue;
    }
    previous = residue;
    have_previous = true;
  }
  throw Error(ErrorCode::ToleranceNotReached, "residue circle rule did not converge");
}

ResidueTuple residues(const AffineSurfaceSpec& spec, const ArcTree& tree, const Quadrature& q) {
  ResidueTuple out;
  out.poles = integral_poles(spec);
  for (const std::size_t pole : out.poles) {
    out.values.push_back(flat_residue_at(spec, tree, pole, std::nullopt, q));
  }
  return out;
}

ResidueTuple res_gamma(const AffineSurfaceSpec& spec, const ArcTree& tree, const Quadrature& q) {
  ResidueTuple out = residues(spec, tree, q);
  double largest = 0.0;
  for (const cplx v : out.values) largest = std::max(largest, std::abs(v));
  if (largest <= 1e-10) {
    throw Error(ErrorCode::AllResiduesZero, "every integral-pole residue vanishes");
  }
  for (const cplx v : out.values) {
    if (std::abs(v) > 1e-8 * largest) {
      const cplx pivot = v;
      for (auto& x : out.values) x /= pivot;
      break;
    }
  }
  out.projective = true;
  return out;
}

cplx residue_sum_check(const AffineSurfaceSpec& spec, const Quadrature& q) {
  const auto report = character_on_basis(spec, standard_basis(spec), q);
  if (!has_trivial_holonomy(report)) {
    throw Error(ErrorCode::NotTranslationSurface, "holonomy is not trivial");
  }
  if (integral_poles(spec).empty()) return {};
  cplx sum{};
  for (const cplx v : residues(spec, default_tree(spec), q).values) sum += v;
  return sum;
}

double fubini_study(const std::vector<cplx>& u, const std::vector<cplx>& v) {
  if (u.size() != v.size()) throw Error(ErrorCode::InvalidSpec, "projective points differ in dimension");
  double nu = 0.0, nv = 0.0, wedge = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    nu += std::norm(u[i]);
    nv += std::norm(v[i]);
    for (std::size_t j = i + 1; j < u.size(); ++j) wedge += std::norm(u[i] * v[j] - u[j] * v[i]);
  }
  if (nu == 0.0 || nv == 0.0) throw Error(ErrorCode::AllResiduesZero, "zero vector is not a projective point");
  return std::asin(std::min(1.0, std::sqrt(wedge / (nu * nv))));
}

}  // namespace holo
