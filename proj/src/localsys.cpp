#include "holo/localsys.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>

#include "holo/error.hpp"

namespace holo {
namespace {

[[noreturn]] void bad_complex(const std::string& msg) { throw Error(ErrorCode::InvalidComplex, msg); }

std::array<std::size_t, 3> sorted(std::array<std::size_t, 3> t) {
  std::sort(t.begin(), t.end());
  return t;
}

// +1 when (x, y, z) is an even permutation of its sorted order.
int orientation_sign(const std::array<std::size_t, 3>& t) {
  int inversions = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) inversions += t[i] > t[j];
  return inversions % 2 == 0 ? 1 : -1;
}

// Triangles incident to each edge.
std::vector<std::vector<std::size_t>> edge_triangles(const SurfaceComplex& k) {
  std::vector<std::vector<std::size_t>> out(k.edges().size());
  for (std::size_t t = 0; t < k.triangles().size(); ++t) {
    const auto& tri = k.triangles()[t];
    for (int i = 0; i < 3; ++i) out[*k.edge_index(tri[i], tri[(i + 1) % 3])].push_back(t);
  }
  return out;
}

struct TreeCotree {
  std::vector<int> kind;                       // 0 tree, 1 cotree, 2 free
  std::vector<std::size_t> free;               // free edge indices, ascending
  std::vector<std::size_t> peel;               // non-root triangles, BFS order
  std::vector<std::size_t> parent_edge;        // per triangle
};

TreeCotree tree_cotree(const SurfaceComplex& k) {
  const std::size_t nv = k.num_vertices();
  const std::size_t ne = k.edges().size();
  const std::size_t nt = k.triangles().size();
  TreeCotree out;
  out.kind.assign(ne, 2);

  std::vector<std::vector<std::size_t>> vertex_edges(nv);
  for (std::size_t e = 0; e < ne; ++e) {
    vertex_edges[k.edges()[e].u].push_back(e);
    vertex_edges[k.edges()[e].v].push_back(e);
  }
  std::vector<bool> seen(nv, false);
  std::deque<std::size_t> queue{0};
  seen[0] = true;
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (const std::size_t e : vertex_edges[v]) {
      const std::size_t w = k.edges()[e].u == v ? k.edges()[e].v : k.edges()[e].u;
      if (seen[w]) continue;
      seen[w] = true;
      out.kind[e] = 0;
      queue.push_back(w);
    }
  }

  // Dual graph: triangles plus one exterior node reached through boundary edges.
  const bool has_boundary = k.num_boundaries() > 0;
  const std::size_t exterior = nt;
  const auto incident = edge_triangles(k);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> dual(nt + (has_boundary ? 1 : 0));
  for (std::size_t e = 0; e < ne; ++e) {
    if (out.kind[e] == 0) continue;
    const auto& ts = incident[e];
    if (ts.size() == 2) {
      dual[ts[0]].emplace_back(ts[1], e);
      dual[ts[1]].emplace_back(ts[0], e);
    } else {
      dual[ts[0]].emplace_back(exterior, e);
      dual[exterior].emplace_back(ts[0], e);
    }
  }
  out.parent_edge.assign(nt, ne);
  std::vector<bool> reached(dual.size(), false);
  const std::size_t root = has_boundary ? exterior : 0;
  reached[root] = true;
  queue.assign(1, root);
  while (!queue.empty()) {
    const std::size_t node = queue.front();
    queue.pop_front();
    for (const auto& [next, e] : dual[node]) {
      if (reached[next]) continue;
      reached[next] = true;
      out.kind[e] = 1;
      out.parent_edge[next] = e;
      out.peel.push_back(next);
      queue.push_back(next);
    }
  }
  for (std::size_t e = 0; e < ne; ++e)
    if (out.kind[e] == 2) out.free.push_back(e);
  return out;
}

// Integer exponents of every edge value in the free-edge values.
std::vector<std::vector<long>> edge_monomials(const SurfaceComplex& k, const TreeCotree& tc) {
  const std::size_t nf = tc.free.size();
  std::vector<std::vector<long>> x(k.edges().size(), std::vector<long>(nf, 0));
  for (std::size_t i = 0; i < nf; ++i) x[tc.free[i]][i] = 1;
  for (auto it = tc.peel.rbegin(); it != tc.peel.rend(); ++it) {
    const auto [a, b, c] = sorted(k.triangles()[*it]);
    const std::size_t ab = *k.edge_index(a, b), bc = *k.edge_index(b, c), ac = *k.edge_index(a, c);
    const std::size_t p = tc.parent_edge[*it];
    // Flatness: x_ab + x_bc - x_ac = 0.
    for (std::size_t i = 0; i < nf; ++i) {
      if (p == ab) x[ab][i] = x[ac][i] - x[bc][i];
      else if (p == bc) x[bc][i] = x[ac][i] - x[ab][i];
      else x[ac][i] = x[ab][i] + x[bc][i];
    }
  }
  return x;
}

cplx monomial(const std::vector<long>& exponents, const std::vector<cplx>& base) {
  cplx out = 1.0;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    const long n = exponents[i];
    for (long j = 0; j < std::labs(n); ++j) out = n > 0 ? out * base[i] : out / base[i];
  }
  return out;
}

void check_flat(const SurfaceComplex& k, const std::vector<cplx>& g) {
  for (const auto& tri : k.triangles()) {
    const auto [a, b, c] = sorted(tri);
    const cplx gab = g[*k.edge_index(a, b)], gbc = g[*k.edge_index(b, c)], gac = g[*k.edge_index(a, c)];
    if (std::abs(gab * gbc - gac) > 1e-10 * std::max(1.0, std::abs(gac))) {
      throw Error(ErrorCode::NonFlatCharacter, "character does not close around triangle (" +
                                                   std::to_string(a) + "," + std::to_string(b) + "," +
                                                   std::to_string(c) + ")");
    }
  }
}

// Greedy vertex-disjoint triangles, in index order.
std::vector<std::size_t> disjoint_triangles(const SurfaceComplex& k, int wanted) {
  std::vector<bool> used(k.num_vertices(), false);
  std::vector<std::size_t> out;
  for (std::size_t t = 0; t < k.triangles().size() && static_cast<int>(out.size()) < wanted; ++t) {
    const auto& tri = k.triangles()[t];
    if (used[tri[0]] || used[tri[1]] || used[tri[2]]) continue;
    for (const auto v : tri) used[v] = true;
    out.push_back(t);
  }
  return out;
}

std::vector<std::array<std::size_t, 3>> grid_torus(std::size_t offset) {
  const auto id = [offset](std::size_t i, std::size_t j) { return offset + i % 3 + 3 * (j % 3); };
  std::vector<std::array<std::size_t, 3>> out;
  for (std::size_t j = 0; j < 3; ++j) {
    for (std::size_t i = 0; i < 3; ++i) {
      out.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      out.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return out;
}

Eigen::BDCSVD<Eigen::MatrixXcd> svd_of(const Eigen::MatrixXcd& m, bool full_v) {
  return Eigen::BDCSVD<Eigen::MatrixXcd>(m, full_v ? Eigen::ComputeFullV : 0);
}

constexpr double kRankTol = 1e-9;

int numerical_rank(const Eigen::VectorXd& sv) {
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) r += sv(i) > kRankTol * sv(0);
  return r;
}

// Cochain complex restricted to the given vertices and edges (all triangles).
CohomologyDims cohomology_of(const SurfaceComplex& k, const Character& chi,
                             const std::vector<std::size_t>& verts,
                             const std::vector<std::size_t>& edges) {
  const auto& g = chi.edge_values();
  if (g.size() != k.edges().size()) throw Error(ErrorCode::InvalidSpec, "character does not match complex");
  std::vector<long> vpos(k.num_vertices(), -1), epos(k.edges().size(), -1);
  for (std::size_t i = 0; i < verts.size(); ++i) vpos[verts[i]] = static_cast<long>(i);
  for (std::size_t i = 0; i < edges.size(); ++i) epos[edges[i]] = static_cast<long>(i);

  const auto n0 = static_cast<Eigen::Index>(verts.size());
  const auto n1 = static_cast<Eigen::Index>(edges.size());
  const auto n2 = static_cast<Eigen::Index>(k.triangles().size());
  Eigen::MatrixXcd d0 = Eigen::MatrixXcd::Zero(n1, n0);
  for (Eigen::Index r = 0; r < n1; ++r) {
    const auto& e = k.edges()[edges[r]];
    // (df)[u, v] = f(v) / g - f(u)
    if (vpos[e.u] >= 0) d0(r, vpos[e.u]) = -1.0;
    if (vpos[e.v] >= 0) d0(r, vpos[e.v]) = 1.0 / g[edges[r]];
  }
  Eigen::MatrixXcd d1 = Eigen::MatrixXcd::Zero(n2, n1);
  for (Eigen::Index t = 0; t < n2; ++t) {
    const auto [a, b, c] = sorted(k.triangles()[t]);
    const std::size_t ab = *k.edge_index(a, b), bc = *k.edge_index(b, c), ac = *k.edge_index(a, c);
    // (d phi)[a, b, c] = phi[b, c] / g_ab - phi[a, c] + phi[a, b]
    if (epos[bc] >= 0) d1(t, epos[bc]) = 1.0 / g[ab];
    if (epos[ac] >= 0) d1(t, epos[ac]) = -1.0;
    if (epos[ab] >= 0) d1(t, epos[ab]) = 1.0;
  }

  const int r0 = numerical_rank(svd_of(d0, false).singularValues());
  const int r1 = numerical_rank(svd_of(d1, false).singularValues());
  CohomologyDims out;
  out.h0 = static_cast<int>(n0) - r0;
  out.h1 = static_cast<int>(n1) - r0 - r1;
  out.h2 = static_cast<int>(n2) - r1;

  // Harmonic representatives: ker d1 intersected with ker d0^*.
  Eigen::MatrixXcd stacked(n2 + n0, n1);
  stacked << d1, d0.adjoint();
  const auto svd = svd_of(stacked, true);
  Eigen::MatrixXcd local = svd.matrixV().rightCols(out.h1);
  out.h1_basis = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(k.edges().size()), out.h1);
  for (Eigen::Index r = 0; r < n1; ++r) out.h1_basis.row(static_cast<Eigen::Index>(edges[r])) = local.row(r);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// SurfaceComplex

std::optional<std::size_t> SurfaceComplex::edge_index(std::size_t a, std::size_t b) const {
  const auto it = edge_lookup_.find({std::min(a, b), std::max(a, b)});
  if (it == edge_lookup_.end()) return std::nullopt;
  return it->second;
}

int SurfaceComplex::euler_characteristic() const noexcept {
  return static_cast<int>(num_vertices_) - static_cast<int>(edges_.size()) + static_cast<int>(triangles_.size());
}

SurfaceComplex SurfaceComplex::from_triangles(std::size_t num_vertices,
                                              std::vector<std::array<std::size_t, 3>> triangles,
                                              const std::vector<std::vector<std::size_t>>& boundary_cycles) {
  SurfaceComplex k;
  k.num_vertices_ = num_vertices;
  k.triangles_ = std::move(triangles);
  if (num_vertices == 0 || k.triangles_.empty()) bad_complex("complex has no triangles");
  std::set<std::array<std::size_t, 3>> distinct;
  for (const auto& t : k.triangles_) {
    for (const auto v : t)
      if (v >= num_vertices) bad_complex("triangle vertex out of range");
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) bad_complex("degenerate triangle");
    if (!distinct.insert(sorted(t)).second) bad_complex("repeated triangle");
  }
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& t : k.triangles_)
    for (int i = 0; i < 3; ++i) pairs.insert({std::min(t[i], t[(i + 1) % 3]), std::max(t[i], t[(i + 1) % 3])});
  for (const auto& [u, v] : pairs) {
    k.edge_lookup_[{u, v}] = k.edges_.size();
    k.edges_.push_back({u, v});
  }

  // Orientation coherence and boundary detection.
  std::vector<int> forward(k.edges_.size(), 0), backward(k.edges_.size(), 0);
  for (const auto& t : k.triangles_) {
    for (int i = 0; i < 3; ++i) {
      const std::size_t a = t[i], b = t[(i + 1) % 3];
      (a < b ? forward : backward)[*k.edge_index(a, b)]++;
    }
  }
  k.edge_boundary_.assign(k.edges_.size(), false);
  for (std::size_t e = 0; e < k.edges_.size(); ++e) {
    const int f = forward[e], b = backward[e];
    if (f + b == 1) k.edge_boundary_[e] = true;
    else if (f != 1 || b != 1) bad_complex("edge " + std::to_string(e) + " is not coherently shared by two triangles");
  }

  std::vector<bool> listed(k.edges_.size(), false);
  k.vertex_boundary_.assign(num_vertices, false);
  std::vector<int> cycle_of_vertex(num_vertices, -1);
  for (std::size_t c = 0; c < boundary_cycles.size(); ++c) {
    const auto& cycle = boundary_cycles[c];
    if (cycle.size() < 3) bad_complex("boundary cycle has fewer than three edges");
    std::map<std::size_t, int> degree;
    for (const auto e : cycle) {
      if (e >= k.edges_.size() || !k.edge_boundary_[e] || listed[e]) bad_complex("boundary cycle lists a non-boundary or repeated edge");
      listed[e] = true;
      degree[k.edges_[e].u]++;
      degree[k.edges_[e].v]++;
    }
    for (const auto& [v, d] : degree) {
      if (d != 2) bad_complex("boundary cycle is not a simple cycle");
      if (cycle_of_vertex[v] >= 0) bad_complex("boundary cycles share a vertex");
      cycle_of_vertex[v] = static_cast<int>(c);
      k.vertex_boundary_[v] = true;
    }
    k.boundary_edges_.push_back(cycle);
  }
  for (std::size_t e = 0; e < k.edges_.size(); ++e)
    if (k.edge_boundary_[e] && !listed[e]) bad_complex("boundary edge " + std::to_string(e) + " is in no boundary cycle");

  // Induced boundary orientation: follow each boundary edge in the direction
  // its triangle traverses it.
  std::map<std::size_t, std::size_t> next;
  for (const auto& t : k.triangles_) {
    for (int i = 0; i < 3; ++i) {
      const std::size_t a = t[i], b = t[(i + 1) % 3];
      if (k.edge_boundary_[*k.edge_index(a, b)]) next[a] = b;
    }
  }
  for (std::size_t c = 0; c < k.boundary_edges_.size(); ++c) {
    const std::size_t start = k.edges_[k.boundary_edges_[c].front()].u;
    std::vector<std::size_t> loop{start};
    std::size_t v = start;
    do {
      v = next.at(v);
      loop.push_back(v);
    } while (v != start && loop.size() <= k.boundary_edges_[c].size() + 1);
    if (v != start || loop.size() != k.boundary_edges_[c].size() + 1) bad_complex("boundary cycle is not connected");
    k.boundary_loops_.push_back(loop);
  }

  // Every vertex must have a single fan of triangles.
  std::vector<std::vector<std::size_t>> star(num_vertices);
  for (std::size_t t = 0; t < k.triangles_.size(); ++t)
    for (const auto v : k.triangles_[t]) star[v].push_back(t);
  for (std::size_t v = 0; v < num_vertices; ++v) {
    if (star[v].empty()) bad_complex("vertex " + std::to_string(v) + " is in no triangle");
    std::vector<bool> hit(star[v].size(), false);
    std::deque<std::size_t> queue{0};
    hit[0] = true;
    std::size_t count = 1;
    while (!queue.empty()) {
      const auto i = queue.front();
      queue.pop_front();
      for (std::size_t j = 0; j < star[v].size(); ++j) {
        if (hit[j]) continue;
        const auto& ti = k.triangles_[star[v][i]];
        const auto& tj = k.triangles_[star[v][j]];
        int shared = 0;
        for (const auto a : ti) shared += std::count(tj.begin(), tj.end(), a);
        if (shared == 2) {
          hit[j] = true;
          ++count;
          queue.push_back(j);
        }
      }
    }
    if (count != star[v].size()) bad_complex("vertex " + std::to_string(v) + " is singular");
  }

  // Connectedness through edges.
  std::vector<std::size_t> root(num_vertices);
  std::iota(root.begin(), root.end(), 0);
  const auto find = [&root](std::size_t x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (const auto& e : k.edges_) root[find(e.u)] = find(e.v);
  for (std::size_t v = 0; v < num_vertices; ++v)
    if (find(v) != find(0)) bad_complex("complex is not connected");

  const int twice_genus = 2 - k.num_boundaries() - k.euler_characteristic();
  if (twice_genus < 0 || twice_genus % 2 != 0) bad_complex("Euler characteristic is not that of an orientable surface");
  k.genus_ = twice_genus / 2;

  for (std::size_t c = 0; c < k.boundary_loops_.size(); ++c)
    k.generators_.push_back({"d" + std::to_string(c), k.boundary_loops_[c]});
  return k;
}

SurfaceComplex SurfaceComplex::standard(int genus, int boundaries) {
  if (genus < 0 || genus > 2 || boundaries < 0) throw Error(ErrorCode::GenusUnsupported, "standard complexes cover genus 0, 1, 2");
  std::size_t nv = 0;
  std::vector<std::array<std::size_t, 3>> tris;
  std::vector<Generator> handles;
  if (genus == 0) {
    nv = 4;
    tris = {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}};
  } else if (genus == 1) {
    nv = 9;
    tris = grid_torus(0);
    handles = {{"a", {0, 1, 2, 0}}, {"b", {0, 3, 6, 0}}};
  } else {
    // Connected sum of two grid tori along triangle (4, 5, 8) of the first;
    // the second torus's (13, 14, 17) is glued with reversed orientation.
    auto first = grid_torus(0);
    auto second = grid_torus(9);
    const std::array<std::size_t, 3> cut_a{4, 5, 8}, cut_b{13, 14, 17};
    std::map<std::size_t, std::size_t> relabel{{13, 4}, {17, 5}, {14, 8}};
    std::size_t fresh = 9;
    for (std::size_t v = 9; v < 18; ++v)
      if (!relabel.contains(v)) relabel[v] = fresh++;
    nv = fresh;
    for (const auto& t : first)
      if (t != cut_a) tris.push_back(t);
    for (const auto& t : second)
      if (t != cut_b) tris.push_back({relabel[t[0]], relabel[t[1]], relabel[t[2]]});
    handles = {{"a1", {0, 1, 2, 0}},
               {"b1", {0, 3, 6, 0}},
               {"a2", {relabel[9], relabel[10], relabel[11], relabel[9]}},
               {"b2", {relabel[9], relabel[12], relabel[15], relabel[9]}}};
  }

  SurfaceComplex closed = from_triangles(nv, tris, {});
  closed.generators_ = handles;
  while (static_cast<int>(disjoint_triangles(closed, boundaries).size()) < boundaries) closed = closed.barycentric();
  const auto cut = disjoint_triangles(closed, boundaries);

  std::vector<std::array<std::size_t, 3>> kept;
  for (std::size_t t = 0; t < closed.triangles_.size(); ++t)
    if (std::find(cut.begin(), cut.end(), t) == cut.end()) kept.push_back(closed.triangles_[t]);
  std::vector<std::vector<std::size_t>> cycles;
  for (const auto t : cut) {
    const auto& tri = closed.triangles_[t];
    cycles.push_back({*closed.edge_index(tri[0], tri[1]), *closed.edge_index(tri[1], tri[2]),
                      *closed.edge_index(tri[0], tri[2])});
  }
  // Removing triangles leaves the edge set (and so edge indices) unchanged.
  SurfaceComplex k = from_triangles(closed.num_vertices_, kept, cycles);
  std::vector<Generator> gens = closed.generators_;
  gens.insert(gens.end(), k.generators_.begin(), k.generators_.end());
  k.generators_ = std::move(gens);
  return k;
}

SurfaceComplex SurfaceComplex::barycentric() const {
  const std::size_t nv = num_vertices_, ne = edges_.size();
  const auto mid = [&](std::size_t a, std::size_t b) { return nv + *edge_index(a, b); };
  std::vector<std::size_t> parent(nv + ne + triangles_.size());
  for (std::size_t v = 0; v < nv; ++v) parent[v] = v;
  for (std::size_t e = 0; e < ne; ++e) parent[nv + e] = edges_[e].u;
  std::vector<std::array<std::size_t, 3>> tris;
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    const std::size_t c = nv + ne + t;
    parent[c] = *std::min_element(tri.begin(), tri.end());
    for (int i = 0; i < 3; ++i) {
      const std::size_t x = tri[i], y = tri[(i + 1) % 3];
      tris.push_back({x, mid(x, y), c});
      tris.push_back({mid(x, y), y, c});
    }
  }
  // Triangles are numbered densely so the vertex count is exact.
  const std::size_t total = nv + ne + triangles_.size();

  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& t : tris)
    for (int i = 0; i < 3; ++i) pairs.insert({std::min(t[i], t[(i + 1) % 3]), std::max(t[i], t[(i + 1) % 3])});
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  for (const auto& p : pairs) index.emplace(p, index.size());
  const auto fine_edge = [&](std::size_t a, std::size_t b) { return index.at({std::min(a, b), std::max(a, b)}); };

  std::vector<std::vector<std::size_t>> cycles;
  for (const auto& cycle : boundary_edges_) {
    std::vector<std::size_t> fine;
    for (const auto e : cycle) {
      fine.push_back(fine_edge(edges_[e].u, nv + e));
      fine.push_back(fine_edge(nv + e, edges_[e].v));
    }
    cycles.push_back(fine);
  }
  SurfaceComplex k = from_triangles(total, std::move(tris), cycles);
  std::vector<Generator> gens;
  for (const auto& g : generators_) {
    if (g.name.starts_with('d')) continue;
    Generator fine{g.name, {g.vertices.front()}};
    for (std::size_t i = 1; i < g.vertices.size(); ++i) {
      fine.vertices.push_back(mid(g.vertices[i - 1], g.vertices[i]));
      fine.vertices.push_back(g.vertices[i]);
    }
    gens.push_back(std::move(fine));
  }
  gens.insert(gens.end(), k.generators_.begin(), k.generators_.end());
  k.generators_ = std::move(gens);
  k.parent_ = std::move(parent);
  return k;
}

// ---------------------------------------------------------------------------
// Character

Character Character::from_edge_values(const SurfaceComplex& k, std::vector<cplx> values) {
  if (values.size() != k.edges().size()) throw Error(ErrorCode::InvalidSpec, "character needs one value per edge");
  for (const auto& v : values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || v == cplx(0.0, 0.0))
      throw Error(ErrorCode::InvalidSpec, "character values must be finite and nonzero");
  check_flat(k, values);
  Character chi;
  chi.values_ = std::move(values);
  return chi;
}

Character Character::trivial(const SurfaceComplex& k) {
  Character chi;
  chi.values_.assign(k.edges().size(), 1.0);
  return chi;
}

Character Character::from_free_edges(const SurfaceComplex& k, const std::map<std::size_t, cplx>& values) {
  const auto tc = tree_cotree(k);
  std::vector<cplx> base;
  for (const auto e : tc.free) {
    const auto it = values.find(e);
    if (it == values.end()) throw Error(ErrorCode::MissingGeneratorValue, "no value for free edge e" + std::to_string(e));
    base.push_back(it->second);
  }
  for (const auto& [e, v] : values)
    if (std::find(tc.free.begin(), tc.free.end(), e) == tc.free.end())
      throw Error(ErrorCode::InvalidSpec, "edge e" + std::to_string(e) + " is not a free edge");
  const auto x = edge_monomials(k, tc);
  std::vector<cplx> g(k.edges().size());
  for (std::size_t e = 0; e < g.size(); ++e) g[e] = monomial(x[e], base);
  return from_edge_values(k, std::move(g));
}

Character Character::from_generators(const SurfaceComplex& k, const std::map<std::string, cplx>& values) {
  const auto tc = tree_cotree(k);
  const auto x = edge_monomials(k, tc);
  const auto nf = static_cast<Eigen::Index>(tc.free.size());

  std::vector<std::pair<Eigen::RowVectorXd, cplx>> rows;
  for (const auto& [name, value] : values) {
    const auto it = std::find_if(k.generators().begin(), k.generators().end(),
                                 [&](const Generator& g) { return g.name == name; });
    if (it == k.generators().end()) throw Error(ErrorCode::InvalidSpec, "unknown generator '" + name + "'");
    if (value == cplx(0.0, 0.0) || !std::isfinite(std::abs(value)))
      throw Error(ErrorCode::InvalidSpec, "generator values must be finite and nonzero");
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(nf);
    for (std::size_t i = 1; i < it->vertices.size(); ++i) {
      const std::size_t a = it->vertices[i - 1], b = it->vertices[i];
      const auto& ex = x[*k.edge_index(a, b)];
      for (Eigen::Index j = 0; j < nf; ++j) row(j) += a < b ? ex[j] : -ex[j];
    }
    rows.emplace_back(row, value);
  }

  // Keep an independent subset of rows; the rest are checked afterwards.
  Eigen::MatrixXd pick(0, nf);
  Eigen::VectorXcd rhs(0);
  for (const auto& [row, value] : rows) {
    Eigen::MatrixXd trial(pick.rows() + 1, nf);
    trial << pick, row;
    if (Eigen::FullPivLU<Eigen::MatrixXd>(trial).rank() == trial.rows()) {
      pick = trial;
      rhs.conservativeResize(rhs.size() + 1);
      rhs(rhs.size() - 1) = std::log(value);
    }
  }
  if (pick.rows() < nf) throw Error(ErrorCode::MissingGeneratorValue, "generator values do not determine the character");
  const Eigen::VectorXcd logs = pick.cast<cplx>().fullPivLu().solve(rhs);
  std::map<std::size_t, cplx> free_values;
  for (Eigen::Index j = 0; j < nf; ++j) free_values[tc.free[j]] = std::exp(logs(j));
  Character chi = from_free_edges(k, free_values);

  for (const auto& [name, value] : values) {
    const auto it = std::find_if(k.generators().begin(), k.generators().end(),
                                 [&](const Generator& g) { return g.name == name; });
    const cplx got = chi.along(k, it->vertices);
    if (std::abs(got - value) > 1e-9 * std::max(1.0, std::abs(value)))
      throw Error(ErrorCode::NonFlatCharacter, "generator values violate the surface relation at '" + name + "'");
  }
  return chi;
}

cplx Character::transport(const SurfaceComplex& k, std::size_t a, std::size_t b) const {
  if (a == b) return 1.0;
  const auto e = k.edge_index(a, b);
  if (!e) throw Error(ErrorCode::InvalidSpec, "vertices are not adjacent");
  return a < b ? values_[*e] : 1.0 / values_[*e];
}

cplx Character::along(const SurfaceComplex& k, const std::vector<std::size_t>& path) const {
  cplx out = 1.0;
  for (std::size_t i = 1; i < path.size(); ++i) out *= transport(k, path[i - 1], path[i]);
  return out;
}

Character Character::inverse() const {
  Character chi;
  for (const auto& v : values_) chi.values_.push_back(1.0 / v);
  return chi;
}

Character Character::conjugate() const {
  Character chi;
  for (const auto& v : values_) chi.values_.push_back(std::conj(v));
  return chi;
}

bool Character::is_unitary(double tol) const {
  return std::all_of(values_.begin(), values_.end(), [tol](cplx v) { return std::abs(std::abs(v) - 1.0) <= tol; });
}

Character Character::refined(const SurfaceComplex& coarse, const SurfaceComplex& fine) const {
  const auto& parent = fine.parent_vertex();
  if (parent.size() != fine.num_vertices()) throw Error(ErrorCode::InvalidSpec, "complex is not a refinement");
  std::vector<cplx> g(fine.edges().size());
  for (std::size_t e = 0; e < g.size(); ++e) g[e] = transport(coarse, parent[fine.edges()[e].u], parent[fine.edges()[e].v]);
  return from_edge_values(fine, std::move(g));
}

std::vector<std::size_t> free_edges(const SurfaceComplex& k) { return tree_cotree(k).free; }

// ---------------------------------------------------------------------------
// Cohomology

CohomologyDims twisted_cohomology(const SurfaceComplex& k, const Character& chi) {
  check_flat(k, chi.edge_values());
  std::vector<std::size_t> verts(k.num_vertices()), edges(k.edges().size());
  std::iota(verts.begin(), verts.end(), 0);
  std::iota(edges.begin(), edges.end(), 0);
  return cohomology_of(k, chi, verts, edges);
}

CohomologyDims compact_support_cohomology(const SurfaceComplex& k, const Character& chi) {
  check_flat(k, chi.edge_values());
  std::vector<std::size_t> verts, edges;
  for (std::size_t v = 0; v < k.num_vertices(); ++v)
    if (!k.vertex_on_boundary(v)) verts.push_back(v);
  for (std::size_t e = 0; e < k.edges().size(); ++e)
    if (!k.edge_on_boundary(e)) edges.push_back(e);
  return cohomology_of(k, chi, verts, edges);
}

PairingReport veech_pairing(const SurfaceComplex& k, const Character& chi) {
  if (!chi.is_unitary(1e-12)) throw Error(ErrorCode::NonUnitaryCharacter, "Veech pairing needs |chi| = 1 on every edge");
  const auto hc = compact_support_cohomology(k, chi);
  const auto& g = chi.edge_values();
  const Eigen::Index n = hc.h1;
  const Eigen::MatrixXcd& phi = hc.h1_basis;

  PairingReport report;
  report.matrix = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& tri : k.triangles()) {
    const int eps = orientation_sign(tri);
    const auto [a, b, c] = sorted(tri);
    const auto ab = static_cast<Eigen::Index>(*k.edge_index(a, b));
    const auto bc = static_cast<Eigen::Index>(*k.edge_index(b, c));
    // (phi cup conj psi)[a, b, c] = phi[a, b] * conj(P_ba psi[b, c]) with P_ba = 1 / g_ab.
    const cplx back = std::conj(1.0 / g[ab]);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index s = 0; s < n; ++s)
        report.matrix(r, s) += static_cast<double>(eps) * phi(ab, r) * back * std::conj(phi(bc, s));
  }
  report.matrix *= cplx(0.0, 1.0);
  report.hermitian_defect = n == 0 ? 0.0 : (report.matrix - report.matrix.adjoint()).cwiseAbs().maxCoeff();
  if (n == 0) return report;

  const Eigen::VectorXd sv = svd_of(report.matrix, false).singularValues();
  report.sigma_max = sv(0);
  report.sigma_min = sv(n - 1);
  const Eigen::MatrixXcd herm = 0.5 * (report.matrix + report.matrix.adjoint());
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(herm, Eigen::EigenvaluesOnly).eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > kPairingMargin * report.sigma_max) ++report.positive;
    else if (ev(i) < -kPairingMargin * report.sigma_max) ++report.negative;
  }
  // The basis is orthonormal, so a nondegenerate form has entries of order 1.
  if (!(report.sigma_min > kPairingMargin * report.sigma_max) || report.sigma_max <= kPairingFloor) {
    throw Error(ErrorCode::DegeneratePairing,
                "cup-product pairing is degenerate: sigma_min / sigma_max = " +
                    std::to_string(report.sigma_max > 0.0 ? report.sigma_min / report.sigma_max : 0.0));
  }
  return report;
}

}  // namespace holo
