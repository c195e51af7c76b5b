#include "holo/deformation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <optional>
#include <thread>

#include "holo/error.hpp"

namespace holo {
namespace {

[[noreturn]] void bad_direction(const std::string& msg) { throw Error(ErrorCode::InvalidDirection, msg); }

// What the Jacobian differentiates: log chi on fixed loops, optionally
// followed by residue ratios r_i / r_chart.
struct TargetMap {
  AffineSurfaceSpec base;
  std::vector<NamedLoop> loops;
  std::optional<ArcTree> tree;
  std::vector<std::size_t> poles;
  std::size_t chart = 0;  // position in `poles` of the dividing coordinate

  Eigen::Index size() const {
    return static_cast<Eigen::Index>(loops.size() + (tree ? poles.size() - 1 : 0));
  }

  Eigen::VectorXcd operator()(const AffineSurfaceSpec& s, const Quadrature& q) const {
    Eigen::VectorXcd out(size());
    const Connection conn(s);
    Eigen::Index row = 0;
    for (const auto& l : loops) out(row++) = log_holonomy(conn, l.loop, q);
    if (tree) {
      const auto res = residues(s, adapt_tree(*tree, base, s), q);
      for (std::size_t i = 0; i < poles.size(); ++i)
        if (i != chart) out(row++) = res.values[i] / res.values[chart];
    }
    return out;
  }
};

double loop_clearance(const AffineSurfaceSpec& spec, const std::vector<NamedLoop>& loops) {
  double best = std::numeric_limits<double>::infinity();
  const int reach = spec.genus == 1 ? 2 : 0;
  for (const auto& l : loops) {
    const Path path = l.loop.trace(spec.tau);
    for (const auto& c : spec.cone_points)
      for (int m = -reach; m <= reach; ++m)
        for (int n = -reach; n <= reach; ++n)
          best = std::min(best, path.distance_to(c.position + static_cast<double>(m) + static_cast<double>(n) * spec.tau));
  }
  return best;
}

void check_clearance(const AffineSurfaceSpec& spec, const std::vector<NamedLoop>& loops, double displacement) {
  const double clearance = loop_clearance(spec, loops);
  if (clearance <= 2.0 * displacement) {
    throw Error(ErrorCode::StepCollision, "a basis loop passes within " + std::to_string(clearance) +
                                              " of a cone point; step displacement " + std::to_string(displacement));
  }
}

int rank_of(const Eigen::VectorXd& sv, double tol) {
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) r += sv(i) > tol * sv(0);
  return r;
}

int block_rank(const Eigen::MatrixXcd& m, double tol, double scale) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  const Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXcd>(m).singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) r += sv(i) > tol * scale;
  return r;
}

// Central differences along the real axis of each complex parameter; the
// maps are holomorphic in all family parameters.
Eigen::MatrixXcd jacobian(const TargetMap& f, const SpecFamily& family, const DeformationOptions& opts) {
  const auto d = static_cast<Eigen::Index>(family.directions.size());
  Eigen::MatrixXcd jac(f.size(), d);
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(d));
  std::atomic<Eigen::Index> next{0};
  const auto work = [&] {
    for (Eigen::Index col = next++; col < d; col = next++) {
      try {
        std::vector<cplx> t(static_cast<std::size_t>(d), 0.0);
        t[static_cast<std::size_t>(col)] = opts.step;
        const auto plus = f(apply_directions(family.base, family.directions, t), opts.q);
        t[static_cast<std::size_t>(col)] = -opts.step;
        const auto minus = f(apply_directions(family.base, family.directions, t), opts.q);
        jac.col(col) = (plus - minus) / (2.0 * opts.step);
      } catch (...) {
        failures[static_cast<std::size_t>(col)] = std::current_exception();
      }
    }
  };
  const int threads = std::clamp(opts.jobs, 1, static_cast<int>(std::max<Eigen::Index>(d, 1)));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : failures)
    if (e) std::rethrow_exception(e);
  return jac;
}

RankReport analyse(Eigen::MatrixXcd jac, std::vector<std::string> rows, int target_dim, Eigen::Index hol_rows,
                   const DeformationOptions& opts) {
  RankReport r;
  r.rows = std::move(rows);
  const Eigen::BDCSVD<Eigen::MatrixXcd> svd(jac, Eigen::ComputeFullV);
  r.singular_values = svd.singularValues();
  r.rank = rank_of(r.singular_values, opts.rank_tol);
  const double scale = r.singular_values.size() > 0 ? r.singular_values(0) : 0.0;
  r.hol_rank = block_rank(jac.topRows(hol_rows), opts.rank_tol, scale);
  r.res_rank = block_rank(jac.bottomRows(jac.rows() - hol_rows), opts.rank_tol, scale);
  r.kernel = svd.matrixV().rightCols(jac.cols() - r.rank);
  r.target_dim = target_dim;
  r.verdict = r.rank == std::min<int>(target_dim, static_cast<int>(jac.cols())) ? Verdict::Submersion
                                                                               : Verdict::RankDeficient;
  r.jacobian = std::move(jac);
  return r;
}

int hol_target_dim(const AffineSurfaceSpec& spec, const std::vector<NamedLoop>& basis, bool freeze_poles) {
  // Cone loops satisfy one relation when all of them vary. With frozen
  // integral poles their loops are constant and drop out.
  const auto poles = integral_poles(spec);
  int cones = 0, lattice = 0, frozen = 0;
  for (const auto& l : basis) {
    if (!l.id.starts_with('c')) {
      ++lattice;
      continue;
    }
    const auto j = static_cast<std::size_t>(std::stoul(l.id.substr(1)));
    if (freeze_poles && std::find(poles.begin(), poles.end(), j) != poles.end()) continue;
    ++cones;
  }
  for (std::size_t j = 0; j < spec.cone_points.size(); ++j)
    if (freeze_poles && std::find(poles.begin(), poles.end(), j) != poles.end()) ++frozen;
  const int varying = static_cast<int>(spec.cone_points.size()) - frozen;
  const bool all_cones = cones == varying && cones > 0;
  return lattice + cones - (all_cones ? 1 : 0);
}

double max_displacement(const std::vector<Direction>& directions, std::span<const cplx> t) {
  double out = 0.0;
  for (std::size_t i = 0; i < directions.size(); ++i)
    if (directions[i].kind == Direction::Kind::MovePoint || directions[i].kind == Direction::Kind::Tau)
      out = std::max(out, std::abs(t[i]));
  return out;
}

double max_step_displacement(const SpecFamily& family, double step) {
  std::vector<cplx> t(family.directions.size(), step);
  return max_displacement(family.directions, t);
}

TargetMap residue_target(const SpecFamily& family, const std::vector<NamedLoop>& basis, const ArcTree& tree,
                         const Quadrature& q) {
  const auto& base = family.base;
  if (is_translation_surface(base, q) != TranslationType::NotTranslation)
    throw Error(ErrorCode::NotInAdmissibleLocus, "base spec is a translation surface");
  const auto poles = integral_poles(base);
  if (poles.empty()) throw Error(ErrorCode::NotInAdmissibleLocus, "base spec has no integral pole");
  for (const auto& d : family.directions) {
    if (d.kind != Direction::Kind::OrderPair) continue;
    if (is_integral_pole(base.cone_points[d.plus].order) || is_integral_pole(base.cone_points[d.minus].order))
      bad_direction("order_pair changes the order of an integral pole");
  }
  TargetMap f{base, basis, validated_tree(base, tree), poles, 0};
  const auto res = residues(base, *f.tree, q);
  double best = 0.0;
  for (std::size_t i = 0; i < res.values.size(); ++i) {
    if (std::abs(res.values[i]) > best) {
      best = std::abs(res.values[i]);
      f.chart = i;
    }
  }
  if (best <= 1e-10) throw Error(ErrorCode::AllResiduesZero, "every integral-pole residue vanishes at the base");
  return f;
}

std::vector<std::string> row_labels(const TargetMap& f) {
  std::vector<std::string> rows;
  for (const auto& l : f.loops) rows.push_back(l.id);
  if (f.tree) {
    for (std::size_t i = 0; i < f.poles.size(); ++i)
      if (i != f.chart) rows.push_back("r" + std::to_string(f.poles[i]) + "/r" + std::to_string(f.poles[f.chart]));
  }
  return rows;
}

}  // namespace

std::string_view to_string(Direction::Kind kind) noexcept {
  switch (kind) {
    case Direction::Kind::MovePoint: return "move_point";
    case Direction::Kind::OrderPair: return "order_pair";
    case Direction::Kind::Lambda: return "lambda";
    case Direction::Kind::Tau: return "tau";
  }
  return "unknown";
}

std::string_view to_string(Verdict verdict) noexcept {
  return verdict == Verdict::Submersion ? "submersion" : "rank_deficient";
}

void validate_family(const SpecFamily& family) {
  require_valid(family.base);
  const std::size_t n = family.base.cone_points.size();
  for (const auto& d : family.directions) {
    switch (d.kind) {
      case Direction::Kind::MovePoint:
        if (d.index >= n) bad_direction("move_point index out of range");
        break;
      case Direction::Kind::OrderPair:
        if (d.plus >= n || d.minus >= n) bad_direction("order_pair index out of range");
        if (d.plus == d.minus) bad_direction("order_pair needs two distinct cone points");
        break;
      case Direction::Kind::Lambda:
      case Direction::Kind::Tau:
        if (family.base.genus != 1) bad_direction("lambda and tau directions exist only at genus 1");
        break;
    }
  }
}

AffineSurfaceSpec apply_directions(const AffineSurfaceSpec& base, const std::vector<Direction>& directions,
                                   std::span<const cplx> t) {
  if (t.size() != directions.size()) throw Error(ErrorCode::InvalidSpec, "one parameter per direction");
  AffineSurfaceSpec s = base;
  for (std::size_t i = 0; i < directions.size(); ++i) {
    const auto& d = directions[i];
    switch (d.kind) {
      case Direction::Kind::MovePoint: s.cone_points[d.index].position += t[i]; break;
      case Direction::Kind::OrderPair:
        s.cone_points[d.plus].order += t[i];
        s.cone_points[d.minus].order -= t[i];
        break;
      case Direction::Kind::Lambda: s.lambda += t[i]; break;
      case Direction::Kind::Tau: s.tau += t[i]; break;
    }
  }
  return s;
}

SpecFamily leaf_family(const AffineSurfaceSpec& spec) {
  SpecFamily f{spec, {}};
  const std::size_t fixed = spec.genus == 0 ? 3 : 1;
  for (std::size_t j = fixed; j < spec.cone_points.size(); ++j) f.directions.push_back(Direction::move_point(j));
  if (spec.genus == 1) {
    f.directions.push_back(Direction::lambda());
    f.directions.push_back(Direction::tau());
  }
  std::vector<std::size_t> free;
  for (std::size_t j = 0; j < spec.cone_points.size(); ++j)
    if (!is_integral_pole(spec.cone_points[j].order)) free.push_back(j);
  for (std::size_t i = 0; i + 1 < free.size(); ++i) f.directions.push_back(Direction::order_pair(free[i], free.back()));
  return f;
}

RankReport hol_jacobian(const SpecFamily& family, const std::vector<NamedLoop>& basis, const DeformationOptions& opts) {
  validate_family(family);
  check_clearance(family.base, basis, max_step_displacement(family, opts.step));
  const TargetMap f{family.base, basis, std::nullopt, {}, 0};
  const auto rows = static_cast<Eigen::Index>(basis.size());
  return analyse(jacobian(f, family, opts), row_labels(f), hol_target_dim(family.base, basis, false), rows, opts);
}

RankReport hol_res_jacobian(const SpecFamily& family, const std::vector<NamedLoop>& basis, const ArcTree& tree,
                            const DeformationOptions& opts) {
  validate_family(family);
  check_clearance(family.base, basis, max_step_displacement(family, opts.step));
  const auto f = residue_target(family, basis, tree, opts.q);
  const int target = hol_target_dim(family.base, basis, true) + static_cast<int>(f.poles.size()) - 1;
  return analyse(jacobian(f, family, opts), row_labels(f), target, static_cast<Eigen::Index>(basis.size()), opts);
}

LeafStep leaf_step(const AffineSurfaceSpec& spec, const ArcTree& tree, double step, const DeformationOptions& opts) {
  LeafStep out{spec, validated_tree(spec, tree), 0, 0.0, 0.0};
  if (step == 0.0) return out;
  const SpecFamily family = leaf_family(spec);
  const auto basis = standard_basis(spec);
  const auto base_report = hol_res_jacobian(family, basis, tree, opts);
  if (base_report.kernel.cols() == 0) throw Error(ErrorCode::ZeroKernel, "the isoresidual leaf is a point here");

  // Last kernel vector (smallest singular value), phase fixed so its
  // largest entry is real and positive.
  Eigen::VectorXcd v = base_report.kernel.col(base_report.kernel.cols() - 1);
  Eigen::Index big = 0;
  v.cwiseAbs().maxCoeff(&big);
  v *= std::conj(v(big)) / std::abs(v(big));

  const auto f = residue_target(family, basis, out.tree, opts.q);
  const Eigen::VectorXcd target = f(spec, opts.q);
  Eigen::VectorXcd t = step * v;
  const auto params = [&] { return std::vector<cplx>(t.data(), t.data() + t.size()); };

  const auto evaluate = [&](const Eigen::VectorXcd& at) {
    const std::vector<cplx> p(at.data(), at.data() + at.size());
    check_clearance(spec, basis, max_displacement(family.directions, p));
    const auto s = apply_directions(spec, family.directions, p);
    require_valid(s);
    return f(s, opts.q);
  };

  Eigen::VectorXcd residual = evaluate(t) - target;
  const double tol = 0.1 * kLeafTol;
  int it = 0;
  while (residual.cwiseAbs().maxCoeff() > tol) {
    if (it == 10) {
      throw Error(ErrorCode::NewtonDivergence, "Newton correction did not converge; residual " +
                                                   std::to_string(residual.cwiseAbs().maxCoeff()));
    }
    // Jacobian at the current point, reusing the base chart and loops.
    Eigen::MatrixXcd jac(f.size(), t.size());
    for (Eigen::Index col = 0; col < t.size(); ++col) {
      Eigen::VectorXcd tp = t, tm = t;
      tp(col) += opts.step;
      tm(col) -= opts.step;
      jac.col(col) = (evaluate(tp) - evaluate(tm)) / (2.0 * opts.step);
    }
    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(jac);
    t -= cod.pseudoInverse() * residual;
    residual = evaluate(t) - target;
    ++it;
  }

  out.spec = apply_directions(spec, family.directions, params());
  out.tree = adapt_tree(out.tree, spec, out.spec);
  out.newton_iterations = it;
  const Eigen::Index hol_rows = static_cast<Eigen::Index>(basis.size());
  out.hol_drift = hol_rows > 0 ? residual.head(hol_rows).cwiseAbs().maxCoeff() : 0.0;
  const auto before = residues(spec, f.tree.value(), opts.q).values;
  const auto after = residues(out.spec, out.tree, opts.q).values;
  out.res_drift = fubini_study(before, after);
  return out;
}

LeafWalk leaf_walk(const AffineSurfaceSpec& spec, const ArcTree& tree, double step, int count,
                   const DeformationOptions& opts) {
  if (count < 0) throw Error(ErrorCode::InvalidSpec, "leaf_walk: negative step count");
  LeafWalk walk;
  const auto start_tree = validated_tree(spec, tree);
  const auto chi0 = character_on_basis(spec, standard_basis(spec), opts.q).chi;
  const auto res0 = res_gamma(spec, start_tree, opts.q).values;
  AffineSurfaceSpec here = spec;
  ArcTree here_tree = start_tree;
  for (int k = 0; k < count; ++k) {
    auto s = leaf_step(here, here_tree, step, opts);
    const auto chi = character_on_basis(s.spec, standard_basis(s.spec), opts.q).chi;
    for (std::size_t i = 0; i < chi.size(); ++i) walk.hol_drift = std::max(walk.hol_drift, std::abs(chi[i] - chi0[i]));
    walk.res_drift = std::max(walk.res_drift, fubini_study(res0, res_gamma(s.spec, s.tree, opts.q).values));
    here = s.spec;
    here_tree = s.tree;
    walk.steps.push_back(std::move(s));
  }
  return walk;
}

}  // namespace holo
