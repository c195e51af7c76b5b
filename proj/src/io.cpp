#include "holo/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "holo/error.hpp"

namespace holo {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

void require_object(const Json& j, const std::string& what, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) parse_fail(what + ": expected an object");
  const std::set<std::string> names(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!names.contains(key)) parse_fail(what + ": unknown field \"" + key + "\"");
  }
}

const Json& field(const Json& j, const char* name, const std::string& what) {
  const auto it = j.find(name);
  if (it == j.end()) parse_fail(what + ": missing field \"" + name + "\"");
  return *it;
}

double number(const Json& j, const std::string& what) {
  if (!j.is_number()) parse_fail(what + ": expected a number");
  return j.get<double>();
}

long long integer(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) parse_fail(what + ": expected an integer");
  return j.get<long long>();
}

std::size_t index(const Json& j, const std::string& what) {
  const auto v = integer(j, what);
  if (v < 0) parse_fail(what + ": expected a nonnegative integer");
  return static_cast<std::size_t>(v);
}

std::vector<cplx> complex_list(const Json& j, const std::string& what) {
  if (!j.is_array()) parse_fail(what + ": expected an array of [re, im]");
  std::vector<cplx> out;
  out.reserve(j.size());
  for (const auto& z : j) out.push_back(cplx_from_json(z));
  return out;
}

Json complex_array(const std::vector<cplx>& zs) {
  Json a = Json::array();
  for (const auto z : zs) a.push_back(to_json(z));
  return a;
}

void dump_to(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        out += Json(key).dump();
        out += ':';
        dump_to(value, out);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        dump_to(j[i], out);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      if (!std::isfinite(x)) {
        out += "null";
        break;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", x);
      std::string s(buf);
      if (s.find_first_of(".e") == std::string::npos) s += ".0";
      out += s;
      break;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    parse_fail(std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

std::string dump(const Json& j) {
  std::string out;
  dump_to(j, out);
  return out;
}

Json to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

cplx cplx_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) parse_fail("complex number: expected [re, im]");
  return {number(j[0], "complex re"), number(j[1], "complex im")};
}

Json to_json(const AffineSurfaceSpec& spec) {
  Json j;
  j["genus"] = spec.genus;
  if (spec.genus == 1) {
    j["tau"] = to_json(spec.tau);
    j["lambda"] = to_json(spec.lambda);
  }
  Json pts = Json::array();
  for (const auto& c : spec.cone_points) {
    Json p;
    p["z"] = to_json(c.position);
    p["order"] = to_json(c.order);
    pts.push_back(std::move(p));
  }
  j["cone_points"] = std::move(pts);
  return j;
}

namespace {

void read_spec_fields(const Json& j, AffineSurfaceSpec& spec) {
  const auto g = integer(field(j, "genus", "surface"), "surface genus");
  if (g != 0 && g != 1) parse_fail("surface: genus must be 0 or 1");
  spec.genus = static_cast<int>(g);
  if (j.contains("tau")) spec.tau = cplx_from_json(j["tau"]);
  if (j.contains("lambda")) spec.lambda = cplx_from_json(j["lambda"]);
  const auto& pts = field(j, "cone_points", "surface");
  if (!pts.is_array()) parse_fail("surface: cone_points must be an array");
  for (const auto& p : pts) {
    require_object(p, "cone point", {"z", "order"});
    spec.cone_points.push_back({cplx_from_json(field(p, "z", "cone point")),
                                cplx_from_json(field(p, "order", "cone point"))});
  }
}

}  // namespace

AffineSurfaceSpec spec_from_json(const Json& j) {
  require_object(j, "surface", {"genus", "tau", "lambda", "cone_points"});
  AffineSurfaceSpec spec;
  read_spec_fields(j, spec);
  return spec;
}

Json to_json(const LoopPath& loop) {
  Json j;
  switch (loop.kind()) {
    case LoopPath::Kind::Circle:
      j["kind"] = "circle";
      j["center"] = to_json(loop.center());
      j["radius"] = loop.radius();
      j["orientation"] = loop.orientation();
      break;
    case LoopPath::Kind::Samples:
      j["kind"] = "samples";
      j["points"] = complex_array(loop.points());
      break;
    case LoopPath::Kind::LatticeA:
    case LoopPath::Kind::LatticeB:
      j["kind"] = loop.kind() == LoopPath::Kind::LatticeA ? "lattice_a" : "lattice_b";
      j["basepoint"] = to_json(loop.basepoint());
      if (loop.orientation() != 1) j["orientation"] = loop.orientation();
      break;
  }
  return j;
}

LoopPath loop_from_json(const Json& j) {
  if (!j.is_object()) parse_fail("loop: expected an object");
  const auto& kind = field(j, "kind", "loop");
  if (!kind.is_string()) parse_fail("loop: kind must be a string");
  const auto k = kind.get<std::string>();
  auto orientation = [&] {
    if (!j.contains("orientation")) return 1;
    const auto o = integer(j["orientation"], "loop orientation");
    if (o != 1 && o != -1) parse_fail("loop: orientation must be 1 or -1");
    return static_cast<int>(o);
  };
  try {
    if (k == "circle") {
      require_object(j, "circle loop", {"kind", "center", "radius", "orientation"});
      return LoopPath::circle(cplx_from_json(field(j, "center", "loop")),
                              number(field(j, "radius", "loop"), "loop radius"), orientation());
    }
    if (k == "samples") {
      require_object(j, "samples loop", {"kind", "points"});
      return LoopPath::samples(complex_list(field(j, "points", "loop"), "loop points"));
    }
    if (k == "lattice_a" || k == "lattice_b") {
      require_object(j, "lattice loop", {"kind", "basepoint", "orientation"});
      const cplx base = cplx_from_json(field(j, "basepoint", "loop"));
      auto loop = k == "lattice_a" ? LoopPath::lattice_a(base) : LoopPath::lattice_b(base);
      return orientation() == 1 ? loop : loop.reversed();
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    parse_fail(std::string("loop: ") + e.what());
  }
  parse_fail("loop: unknown kind \"" + k + "\"");
}

Json to_json(const ArcTree& tree) {
  Json j;
  j["root_index"] = tree.root_index;
  Json arcs = Json::array();
  for (const auto& arc : tree.arcs) {
    Json a;
    a["to_index"] = arc.to_index;
    a["points"] = complex_array(arc.points);
    arcs.push_back(std::move(a));
  }
  j["arcs"] = std::move(arcs);
  return j;
}

ArcTree tree_from_json(const Json& j) {
  require_object(j, "tree", {"root_index", "arcs"});
  ArcTree tree;
  tree.root_index = index(field(j, "root_index", "tree"), "tree root_index");
  const auto& arcs = field(j, "arcs", "tree");
  if (!arcs.is_array()) parse_fail("tree: arcs must be an array");
  for (const auto& a : arcs) {
    require_object(a, "tree arc", {"to_index", "points"});
    tree.arcs.push_back({index(field(a, "to_index", "tree arc"), "arc to_index"),
                         complex_list(field(a, "points", "tree arc"), "arc points")});
  }
  return tree;
}

Json to_json(const Direction& d) {
  Json j;
  j["kind"] = std::string(to_string(d.kind));
  switch (d.kind) {
    case Direction::Kind::MovePoint: j["index"] = d.index; break;
    case Direction::Kind::OrderPair:
      j["plus"] = d.plus;
      j["minus"] = d.minus;
      break;
    default: break;
  }
  return j;
}

Direction direction_from_json(const Json& j) {
  if (!j.is_object()) parse_fail("direction: expected an object");
  const auto& kind = field(j, "kind", "direction");
  if (!kind.is_string()) parse_fail("direction: kind must be a string");
  const auto k = kind.get<std::string>();
  if (k == "move_point") {
    require_object(j, "direction", {"kind", "index"});
    return Direction::move_point(index(field(j, "index", "direction"), "direction index"));
  }
  if (k == "order_pair") {
    require_object(j, "direction", {"kind", "plus", "minus"});
    return Direction::order_pair(index(field(j, "plus", "direction"), "direction plus"),
                                 index(field(j, "minus", "direction"), "direction minus"));
  }
  if (k == "lambda" || k == "tau") {
    require_object(j, "direction", {"kind"});
    return k == "lambda" ? Direction::lambda() : Direction::tau();
  }
  parse_fail("direction: unknown kind \"" + k + "\"");
}

Json to_json(const SpecFamily& family) {
  Json j = to_json(family.base);
  Json dirs = Json::array();
  for (const auto& d : family.directions) dirs.push_back(to_json(d));
  j["directions"] = std::move(dirs);
  return j;
}

SpecFamily family_from_json(const Json& j) {
  require_object(j, "family", {"genus", "tau", "lambda", "cone_points", "directions"});
  SpecFamily family;
  read_spec_fields(j, family.base);
  const auto& dirs = field(j, "directions", "family");
  if (!dirs.is_array()) parse_fail("family: directions must be an array");
  for (const auto& d : dirs) family.directions.push_back(direction_from_json(d));
  return family;
}

Json to_json(const SurfaceComplex& k) {
  Json j;
  j["vertices"] = k.num_vertices();
  Json tris = Json::array();
  for (const auto& t : k.triangles()) tris.push_back(Json::array({t[0], t[1], t[2]}));
  j["triangles"] = std::move(tris);
  Json cycles = Json::array();
  for (const auto& c : k.boundary_cycles()) cycles.push_back(Json(c));
  j["boundary_cycles"] = std::move(cycles);
  return j;
}

SurfaceComplex complex_from_json(const Json& j) {
  require_object(j, "complex", {"vertices", "triangles", "boundary_cycles"});
  const auto n = index(field(j, "vertices", "complex"), "complex vertices");
  std::vector<std::array<std::size_t, 3>> tris;
  const auto& ts = field(j, "triangles", "complex");
  if (!ts.is_array()) parse_fail("complex: triangles must be an array");
  for (const auto& t : ts) {
    if (!t.is_array() || t.size() != 3) parse_fail("complex: triangles are [i, j, k]");
    tris.push_back({index(t[0], "vertex"), index(t[1], "vertex"), index(t[2], "vertex")});
  }
  std::vector<std::vector<std::size_t>> cycles;
  if (j.contains("boundary_cycles")) {
    const auto& cs = j["boundary_cycles"];
    if (!cs.is_array()) parse_fail("complex: boundary_cycles must be an array");
    for (const auto& c : cs) {
      if (!c.is_array()) parse_fail("complex: a boundary cycle is an array of edge indices");
      std::vector<std::size_t> cycle;
      for (const auto& e : c) cycle.push_back(index(e, "edge index"));
      cycles.push_back(std::move(cycle));
    }
  }
  return SurfaceComplex::from_triangles(n, std::move(tris), cycles);
}

Json to_json(const Character& chi) {
  Json values = Json::object();
  const auto& v = chi.edge_values();
  for (std::size_t e = 0; e < v.size(); ++e) values["e" + std::to_string(e)] = to_json(v[e]);
  Json j;
  j["edge_values"] = std::move(values);
  return j;
}

Character character_from_json(const SurfaceComplex& k, const Json& j) {
  require_object(j, "character", {"edge_values", "generators"});
  if (j.contains("edge_values") == j.contains("generators"))
    parse_fail("character: give exactly one of edge_values and generators");
  if (j.contains("generators")) {
    const auto& g = j["generators"];
    if (!g.is_object()) parse_fail("character: generators must be an object");
    std::map<std::string, cplx> values;
    for (const auto& [name, z] : g.items()) values[name] = cplx_from_json(z);
    return Character::from_generators(k, values);
  }
  const auto& ev = j["edge_values"];
  if (!ev.is_object()) parse_fail("character: edge_values must be an object");
  const auto edges = k.edges().size();
  std::vector<cplx> values(edges);
  std::vector<bool> seen(edges, false);
  for (const auto& [key, z] : ev.items()) {
    std::size_t e = 0;
    std::size_t used = 0;
    bool ok = key.size() > 1 && key[0] == 'e';
    if (ok) {
      try {
        e = std::stoul(key.substr(1), &used);
      } catch (const std::exception&) {
        ok = false;
      }
    }
    if (!ok || used != key.size() - 1 || e >= edges) parse_fail("character: bad edge key \"" + key + "\"");
    values[e] = cplx_from_json(z);
    seen[e] = true;
  }
  for (std::size_t e = 0; e < edges; ++e) {
    if (!seen[e]) throw Error(ErrorCode::MissingGeneratorValue, "character: no value for e" + std::to_string(e));
  }
  return Character::from_edge_values(k, std::move(values));
}

Json to_json(const Eigen::MatrixXcd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json to_json(const RankReport& r) {
  Json j;
  j["rows"] = r.rows;
  j["jacobian"] = to_json(r.jacobian);
  j["singular_values"] = to_json(r.singular_values);
  j["rank"] = r.rank;
  j["target_dim"] = r.target_dim;
  j["hol_rank"] = r.hol_rank;
  j["res_rank"] = r.res_rank;
  j["kernel"] = to_json(r.kernel);
  j["verdict"] = std::string(to_string(r.verdict));
  return j;
}

Json error_json(ErrorCode code, const std::string& message) {
  Json j;
  j["error"] = std::string(to_string(code));
  j["message"] = message;
  return j;
}

}  // namespace holo
