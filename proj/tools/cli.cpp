#include "cli.hpp"

#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "holo/cohomology.hpp"
#include "holo/deformation.hpp"
#include "holo/holonomy.hpp"
#include "holo/io.hpp"
#include "holo/localsys.hpp"
#include "holo/residues.hpp"

namespace holo::cli {

namespace {

struct RunConfig {
  std::string surface, loop, tree, family, complex, character, out;
  std::string format = "json";
  std::optional<double> tol;
  int jobs = 1;
  int genus = 0;
  int n = 0;
  int boundaries = 0;
  int steps = 20;
  double step = 1e-2;
  std::string map = "hol";
  std::string orders;
};

Quadrature quadrature(const RunConfig& c) {
  Quadrature q;
  if (c.tol) q.abs_tol = *c.tol;
  return q;
}

DeformationOptions deformation_options(const RunConfig& c) {
  DeformationOptions o;
  o.jobs = c.jobs;
  if (c.tol) o.q.abs_tol = *c.tol;
  return o;
}

AffineSurfaceSpec load_surface(const RunConfig& c) { return spec_from_json(read_json_file(c.surface)); }

ArcTree load_tree(const RunConfig& c, const AffineSurfaceSpec& spec) {
  return c.tree.empty() ? default_tree(spec) : validated_tree(spec, tree_from_json(read_json_file(c.tree)));
}

SurfaceComplex load_complex(const RunConfig& c) {
  if (!c.complex.empty()) return complex_from_json(read_json_file(c.complex));
  return SurfaceComplex::standard(c.genus, c.boundaries);
}

Json dims_json(int h0, int h1, int h2) {
  Json j;
  j["h0"] = h0;
  j["h1"] = h1;
  j["h2"] = h2;
  return j;
}

Json cmd_validate(const RunConfig& c) {
  const auto spec = load_surface(c);
  require_valid(spec);
  Json j;
  j["valid"] = true;
  j["genus"] = spec.genus;
  j["cone_points"] = spec.cone_points.size();
  j["integral_poles"] = integral_poles(spec);
  j["translation"] = std::string(to_string(is_translation_surface(spec, quadrature(c))));
  return j;
}

Json cmd_holonomy(const RunConfig& c) {
  const auto spec = load_surface(c);
  require_valid(spec);
  const auto q = quadrature(c);
  Json j;
  if (!c.loop.empty()) {
    const auto loop = loop_from_json(read_json_file(c.loop));
    const Connection conn(spec);
    j["chi"] = to_json(std::exp(log_holonomy(conn, loop, q)));
    j["tau"] = to_json(turning_number(conn, loop, q));
    return j;
  }
  const auto basis = standard_basis(spec);
  const auto r = character_on_basis(spec, basis, q);
  Json loops = Json::array();
  for (std::size_t i = 0; i < r.ids.size(); ++i) {
    Json l;
    l["id"] = r.ids[i];
    l["loop"] = to_json(basis[i].loop);
    l["chi"] = to_json(r.chi[i]);
    l["tau"] = to_json(r.tau[i]);
    loops.push_back(std::move(l));
  }
  j["loops"] = std::move(loops);
  j["cone_product"] = to_json(r.cone_product);
  j["consistent"] = r.consistent;
  return j;
}

Json cmd_turning(const RunConfig& c) {
  const auto spec = load_surface(c);
  require_valid(spec);
  const auto loop = loop_from_json(read_json_file(c.loop));
  Json j;
  j["tau"] = to_json(turning_number(spec, loop, quadrature(c)));
  j["velocity_winding"] = velocity_winding(loop);
  return j;
}

Json cmd_residues(const RunConfig& c) {
  const auto spec = load_surface(c);
  require_valid(spec);
  const auto q = quadrature(c);
  const auto tree = load_tree(c, spec);
  const auto affine = residues(spec, tree, q);
  Json j;
  j["tree"] = to_json(tree);
  j["normalization_point"] = to_json(normalization_point(spec, tree));
  j["poles"] = affine.poles;
  Json values = Json::array();
  for (const auto z : affine.values) values.push_back(to_json(z));
  j["residues"] = std::move(values);
  try {
    Json proj = Json::array();
    for (const auto z : res_gamma(spec, tree, q).values) proj.push_back(to_json(z));
    j["projective"] = std::move(proj);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::AllResiduesZero) throw;
    j["projective"] = nullptr;
  }
  if (is_translation_surface(spec, q) != TranslationType::NotTranslation)
    j["residue_sum"] = to_json(residue_sum_check(spec, q));
  return j;
}

Json cmd_dims(const RunConfig& c) {
  const auto r = coderivative_rows(c.genus, c.n);
  Json j;
  j["dim_H1_L"] = r.dim_H1_L;
  j["dim_moduli"] = r.dim_moduli;
  j["genus"] = r.genus;
  j["n"] = r.n;
  j["h0_omega_C"] = r.h0_omega_C;
  j["h1_T_minus_C"] = r.h1_T_minus_C;
  j["dim_hol_target"] = r.dim_hol_target;
  j["top"] = r.top;
  j["bottom"] = r.bottom;
  j["top_exact"] = r.top_exact;
  j["bottom_exact"] = r.bottom_exact;
  return j;
}

Json cmd_trans_dims(const RunConfig& c) {
  const auto spec = load_surface(c);
  require_valid(spec);
  const auto d = trans_dims(spec, quadrature(c));
  Json j = dims_json(d.h0, d.h1, d.h2);
  j["euler_defect"] = trans_euler_defect(spec, d);
  return j;
}

Json cmd_twisted(const RunConfig& c) {
  const auto k = load_complex(c);
  const auto chi = character_from_json(k, read_json_file(c.character));
  const auto d = twisted_cohomology(k, chi);
  const auto dc = compact_support_cohomology(k, chi);
  Json j;
  j["vertices"] = k.num_vertices();
  j["edges"] = k.edges().size();
  j["triangles"] = k.triangles().size();
  j["genus"] = k.genus();
  j["boundaries"] = k.num_boundaries();
  j["euler_characteristic"] = k.euler_characteristic();
  j["cohomology"] = dims_json(d.h0, d.h1, d.h2);
  j["compact"] = dims_json(dc.h0, dc.h1, dc.h2);
  return j;
}

Json cmd_pairing(const RunConfig& c) {
  const auto k = load_complex(c);
  const auto chi = character_from_json(k, read_json_file(c.character));
  const auto r = veech_pairing(k, chi);
  Json j;
  j["dim"] = r.matrix.rows();
  j["positive"] = r.positive;
  j["negative"] = r.negative;
  j["sigma_min"] = r.sigma_min;
  j["sigma_max"] = r.sigma_max;
  j["hermitian_defect"] = r.hermitian_defect;
  j["matrix"] = to_json(r.matrix);
  return j;
}

Json cmd_rank(const RunConfig& c) {
  const auto family = family_from_json(read_json_file(c.family));
  validate_family(family);
  const auto basis = standard_basis(family.base);
  const auto opts = deformation_options(c);
  if (c.map == "hol") return to_json(hol_jacobian(family, basis, opts));
  return to_json(hol_res_jacobian(family, basis, load_tree(c, family.base), opts));
}

Json cmd_leaf_walk(const RunConfig& c) {
  const auto spec = load_surface(c);
  require_valid(spec);
  const auto walk = leaf_walk(spec, load_tree(c, spec), c.step, c.steps, deformation_options(c));
  Json steps = Json::array();
  for (std::size_t k = 0; k < walk.steps.size(); ++k) {
    const auto& s = walk.steps[k];
    Json j;
    j["k"] = k + 1;
    j["newton_iterations"] = s.newton_iterations;
    j["hol_drift"] = s.hol_drift;
    j["res_drift"] = s.res_drift;
    j["surface"] = to_json(s.spec);
    steps.push_back(std::move(j));
  }
  Json j;
  j["steps"] = std::move(steps);
  j["hol_drift"] = walk.hol_drift;
  j["res_drift"] = walk.res_drift;
  j["final_tree"] = to_json(walk.steps.empty() ? load_tree(c, spec) : walk.steps.back().tree);
  return j;
}

Json cmd_node_check(const RunConfig& c) {
  const auto orders = parse_json(c.orders);
  if (!orders.is_array() || orders.size() != 2) throw Error(ErrorCode::ParseError, "--orders: expected [[re,im],[re,im]]");
  const NodeGluing g{cplx_from_json(orders[0]), cplx_from_json(orders[1])};
  Json j;
  j["orders"] = Json::array({to_json(g.first), to_json(g.second)});
  j["sum"] = to_json(g.first + g.second);
  j["accepted"] = check_node_gluing(g);
  return j;
}

void flatten(const Json& j, const std::string& key, std::string& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, key.empty() ? k : key + "." + k, out);
  } else if (j.is_array()) {
    if (j.empty()) out += key + ",\n";
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], key + "." + std::to_string(i), out);
  } else {
    out += key + "," + dump(j) + "\n";
  }
}

std::string render(const Json& j, const std::string& format) {
  if (format == "json") return dump(j) + "\n";
  std::string out = "key,value\n";
  flatten(j, "", out);
  return out;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Affine surfaces, holonomy, residues and twisted cohomology"};
  app.require_subcommand(1);
  RunConfig c;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--tol", c.tol, "Quadrature absolute tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--out", c.out, "Write the report here instead of stdout");
    sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };
  auto surface = [&](CLI::App* sub) { sub->add_option("--surface", c.surface, "Surface JSON")->required()->check(CLI::ExistingFile); };
  auto tree = [&](CLI::App* sub) { sub->add_option("--tree", c.tree, "Arc tree JSON")->check(CLI::ExistingFile); };
  auto complex = [&](CLI::App* sub) {
    auto* file = sub->add_option("--complex", c.complex, "Complex JSON")->check(CLI::ExistingFile);
    sub->add_option("--genus", c.genus, "Standard complex genus")->check(CLI::Range(0, 2))->excludes(file);
    sub->add_option("--boundaries", c.boundaries, "Standard complex boundary count")->check(CLI::Range(0, 4))->excludes(file);
    sub->add_option("--character", c.character, "Character JSON")->required()->check(CLI::ExistingFile);
  };
  auto jobs = [&](CLI::App* sub) { sub->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber); };

  std::vector<std::pair<CLI::App*, std::function<Json(const RunConfig&)>>> commands;
  auto add = [&](const char* name, const char* help, std::function<Json(const RunConfig&)> fn) {
    auto* sub = app.add_subcommand(name, help);
    common(sub);
    commands.emplace_back(sub, std::move(fn));
    return sub;
  };

  surface(add("validate", "Check a surface spec", cmd_validate));
  {
    auto* sub = add("holonomy", "Holonomy and turning numbers", cmd_holonomy);
    surface(sub);
    sub->add_option("--loop", c.loop, "Loop JSON")->check(CLI::ExistingFile);
  }
  {
    auto* sub = add("turning", "Turning number of one loop", cmd_turning);
    surface(sub);
    sub->add_option("--loop", c.loop, "Loop JSON")->required()->check(CLI::ExistingFile);
  }
  {
    auto* sub = add("residues", "Residues at integral poles", cmd_residues);
    surface(sub);
    tree(sub);
  }
  {
    auto* sub = add("dims", "Dimension bookkeeping for (g, n)", cmd_dims);
    sub->add_option("--genus", c.genus, "Genus")->required();
    sub->add_option("--n", c.n, "Number of cone points")->required();
  }
  surface(add("trans-dims", "Cohomology of the trans sheaf", cmd_trans_dims));
  complex(add("twisted", "Twisted cohomology of a local system", cmd_twisted));
  complex(add("pairing", "Hermitian pairing on compactly supported H^1", cmd_pairing));
  {
    auto* sub = add("rank", "Jacobian and rank over a family", cmd_rank);
    sub->add_option("--family", c.family, "Family JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--map", c.map, "hol or hol-res")->check(CLI::IsMember({"hol", "hol-res"}));
    tree(sub);
    jobs(sub);
  }
  {
    auto* sub = add("leaf-walk", "Composed steps along the isoresidual leaf", cmd_leaf_walk);
    surface(sub);
    tree(sub);
    jobs(sub);
    sub->add_option("--steps", c.steps, "Number of steps")->check(CLI::NonNegativeNumber);
    sub->add_option("--step", c.step, "Step length");
  }
  add("node-check", "Order matching at a node", cmd_node_check)
      ->add_option("--orders", c.orders, "[[re,im],[re,im]]")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  for (const auto& [sub, fn] : commands) {
    if (!sub->parsed()) continue;
    try {
      const auto text = render(fn(c), c.format);
      if (c.out.empty()) {
        out << text;
      } else {
        std::ofstream f(c.out, std::ios::binary);
        if (!(f << text)) {
          err << dump(error_json(ErrorCode::ParseError, "cannot write " + c.out)) << "\n";
          return 2;
        }
      }
      return 0;
    } catch (const Error& e) {
      err << dump(error_json(e.code(), e.what())) << "\n";
      return e.code() == ErrorCode::ParseError ? 2 : 1;
    } catch (const std::exception& e) {
      Json j;
      j["error"] = "Internal";
      j["message"] = e.what();
      err << dump(j) << "\n";
      return 1;
    }
  }
  return 2;
}

}  // namespace holo::cli
