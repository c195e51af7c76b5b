#include <random>

#include "doctest.h"
#include "holo/error.hpp"
#include "holo/localsys.hpp"

using holo::Character;
using holo::cplx;
using holo::SurfaceComplex;

namespace {

holo::ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const holo::Error& e) {
    return e.code();
  }
  FAIL("expected holo::Error");
  return holo::ErrorCode::InvalidSpec;
}

std::map<std::string, cplx> random_generators(const SurfaceComplex& k, std::mt19937_64& rng, bool unitary) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::map<std::string, cplx> out;
  const int b = k.num_boundaries();
  for (const auto& g : k.generators()) {
    if (b > 0 && g.name == "d" + std::to_string(b - 1)) continue;  // fixed by the relation
    const double r = unitary ? 1.0 : 0.5 + 1.5 * u(rng);
    out[g.name] = std::polar(r, 2.0 * holo::kPi * u(rng));
  }
  return out;
}

// Rank-1 oracle: h0 = [chi trivial], h2 = [chi trivial and closed], h1 by Euler.
std::array<int, 3> expected_dims(const SurfaceComplex& k, bool trivial) {
  const int h0 = trivial ? 1 : 0;
  const int h2 = trivial && k.num_boundaries() == 0 ? 1 : 0;
  return {h0, h0 + h2 - k.euler_characteristic(), h2};
}

}  // namespace

TEST_CASE("standard complexes") {
  for (int g = 0; g <= 2; ++g) {
    for (int b = 0; b <= 4; ++b) {
      const auto k = SurfaceComplex::standard(g, b);
      CHECK(k.euler_characteristic() == 2 - 2 * g - b);
      CHECK(k.genus() == g);
      CHECK(k.num_boundaries() == b);
      CHECK(static_cast<int>(holo::free_edges(k).size()) == (b > 0 ? 2 * g + b - 1 : 2 * g));
      CHECK(static_cast<int>(k.generators().size()) == 2 * g + b);
    }
  }
  CHECK(code_of([] { SurfaceComplex::standard(3, 0); }) == holo::ErrorCode::GenusUnsupported);
}

TEST_CASE("from_triangles: annulus from an octahedron") {
  // Octahedron with poles 0 and 5; removing the faces (0,1,2)-side and
  // (5,...) leaves an annulus.
  std::vector<std::array<std::size_t, 3>> tris = {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 1},
                                                  {5, 2, 1}, {5, 3, 2}, {5, 4, 3}, {5, 1, 4}};
  const auto closed = SurfaceComplex::from_triangles(6, tris, {});
  CHECK(closed.euler_characteristic() == 2);
  // Opposite faces (0,1,2) and (5,4,3) are vertex-disjoint.
  const auto e = [&](std::size_t a, std::size_t b) { return *closed.edge_index(a, b); };
  std::vector<std::array<std::size_t, 3>> kept = {{0, 2, 3}, {0, 3, 4}, {0, 4, 1}, {5, 2, 1}, {5, 3, 2}, {5, 1, 4}};
  const auto annulus = SurfaceComplex::from_triangles(6, kept, {{e(0, 1), e(1, 2), e(0, 2)}, {e(3, 4), e(4, 5), e(3, 5)}});
  CHECK(annulus.genus() == 0);
  CHECK(annulus.num_boundaries() == 2);
  const auto chi = Character::from_generators(annulus, {{"d0", cplx(0.3, 1.2)}});
  CHECK(std::abs(chi.along(annulus, annulus.generators()[1].vertices) * cplx(0.3, 1.2) - 1.0) < 1e-12);
  const auto dims = holo::twisted_cohomology(annulus, chi);
  CHECK(dims.h0 == 0);
  CHECK(dims.h1 == 0);
  CHECK(dims.h2 == 0);
  const auto triv = holo::twisted_cohomology(annulus, Character::trivial(annulus));
  CHECK(triv.h0 == 1);
  CHECK(triv.h1 == 1);
  CHECK(triv.h2 == 0);

  // Defects.
  auto flipped = tris;
  std::swap(flipped[0][1], flipped[0][2]);
  CHECK(code_of([&] { SurfaceComplex::from_triangles(6, flipped, {}); }) == holo::ErrorCode::InvalidComplex);
  CHECK(code_of([&] { SurfaceComplex::from_triangles(6, kept, {{e(0, 1), e(1, 2), e(0, 2)}}); }) ==
        holo::ErrorCode::InvalidComplex);
  CHECK(code_of([&] { SurfaceComplex::from_triangles(7, tris, {}); }) == holo::ErrorCode::InvalidComplex);
}

TEST_CASE("twisted cohomology: fixed examples") {
  const auto torus = SurfaceComplex::standard(1, 0);
  const auto t = holo::twisted_cohomology(torus, Character::trivial(torus));
  CHECK(std::array{t.h0, t.h1, t.h2} == std::array{1, 2, 1});
  CHECK(t.h1_basis.cols() == 2);

  const auto punctured = SurfaceComplex::standard(1, 1);
  const auto chi = Character::from_generators(punctured, {{"a", 2.0}, {"b", 1.0}});
  const auto p = holo::twisted_cohomology(punctured, chi);
  CHECK(std::array{p.h0, p.h1, p.h2} == std::array{0, 1, 0});
  const auto pc = holo::compact_support_cohomology(punctured, chi);
  CHECK(std::array{pc.h0, pc.h1, pc.h2} == std::array{0, 1, 0});

  const auto pants = SurfaceComplex::standard(0, 3);
  const auto s = holo::twisted_cohomology(pants, Character::from_generators(pants, {{"d0", -1.0}, {"d1", -1.0}, {"d2", 1.0}}));
  CHECK(std::array{s.h0, s.h1, s.h2} == std::array{0, 1, 0});

  const auto genus2 = SurfaceComplex::standard(2, 0);
  const auto g2 = holo::compact_support_cohomology(genus2, Character::trivial(genus2));
  CHECK(std::array{g2.h0, g2.h1, g2.h2} == std::array{1, 4, 1});

  const auto four = SurfaceComplex::standard(0, 4);
  const cplx i(0.0, 1.0);
  const auto f = holo::compact_support_cohomology(four, Character::from_generators(four, {{"d0", i}, {"d1", i}, {"d2", -i}, {"d3", -i}}));
  CHECK(f.h1 == 2);
}

TEST_CASE("characters: generators, flatness, refinement") {
  const auto k = SurfaceComplex::standard(2, 2);
  std::mt19937_64 rng(3);
  const auto values = random_generators(k, rng, false);
  const auto chi = Character::from_generators(k, values);
  for (const auto& g : k.generators()) {
    if (values.contains(g.name)) CHECK(std::abs(chi.along(k, g.vertices) - values.at(g.name)) < 1e-10);
  }
  // Inconsistent boundary values.
  CHECK(code_of([&] {
          Character::from_generators(SurfaceComplex::standard(0, 3), {{"d0", 2.0}, {"d1", 2.0}, {"d2", 2.0}});
        }) == holo::ErrorCode::NonFlatCharacter);
  CHECK(code_of([&] { Character::from_generators(k, {{"a1", 2.0}}); }) == holo::ErrorCode::MissingGeneratorValue);

  auto bent = chi.edge_values();
  bent[0] *= 1.5;
  CHECK(code_of([&] { Character::from_edge_values(k, bent); }) == holo::ErrorCode::NonFlatCharacter);

  const auto fine = k.barycentric();
  const auto fine_chi = chi.refined(k, fine);
  for (const auto& g : fine.generators()) {
    if (values.contains(g.name)) CHECK(std::abs(fine_chi.along(fine, g.vertices) - values.at(g.name)) < 1e-10);
  }

  // Free-edge input reproduces the same character.
  std::map<std::size_t, cplx> free;
  for (const auto e : holo::free_edges(k)) free[e] = chi.edge_values()[e];
  const auto again = Character::from_free_edges(k, free);
  for (std::size_t e = 0; e < again.edge_values().size(); ++e)
    CHECK(std::abs(again.edge_values()[e] - chi.edge_values()[e]) < 1e-10 * std::abs(chi.edge_values()[e]));
  free.erase(free.begin());
  CHECK(code_of([&] { Character::from_free_edges(k, free); }) == holo::ErrorCode::MissingGeneratorValue);
}

TEST_CASE("twisted cohomology: Euler, duality, refinement on random characters") {
  std::mt19937_64 rng(11);
  const std::vector<std::pair<int, int>> shapes = {{0, 3}, {0, 4}, {1, 1}, {2, 0}, {1, 2}};
  for (const auto& [g, b] : shapes) {
    const auto k = SurfaceComplex::standard(g, b);
    const auto fine = k.barycentric();
    for (int trial = 0; trial < 4; ++trial) {
      const bool trivial = trial == 0;
      const auto chi = trivial ? Character::trivial(k) : Character::from_generators(k, random_generators(k, rng, trial % 2 == 1));
      const auto h = holo::twisted_cohomology(k, chi);
      CHECK(h.h0 - h.h1 + h.h2 == 2 - 2 * g - b);
      CHECK(std::array{h.h0, h.h1, h.h2} == expected_dims(k, trivial));
      const auto hc = holo::compact_support_cohomology(k, chi);
      const auto dual = holo::twisted_cohomology(k, chi.inverse());
      CHECK(hc.h0 == dual.h2);
      CHECK(hc.h1 == dual.h1);
      CHECK(hc.h2 == dual.h0);
      if (trial < 2) {
        const auto hf = holo::twisted_cohomology(fine, chi.refined(k, fine));
        CHECK(std::array{hf.h0, hf.h1, hf.h2} == std::array{h.h0, h.h1, h.h2});
      }
    }
  }
}

TEST_CASE("harmonic representatives are cocycles orthogonal to coboundaries") {
  const auto k = SurfaceComplex::standard(1, 2);
  std::mt19937_64 rng(8);
  const auto chi = Character::from_generators(k, random_generators(k, rng, false));
  const auto h = holo::twisted_cohomology(k, chi);
  REQUIRE(h.h1_basis.cols() == h.h1);
  const Eigen::MatrixXcd gram = h.h1_basis.adjoint() * h.h1_basis;
  CHECK((gram - Eigen::MatrixXcd::Identity(h.h1, h.h1)).cwiseAbs().maxCoeff() < 1e-10);
  // Cocycle condition on every triangle.
  const auto& g = chi.edge_values();
  for (const auto& tri : k.triangles()) {
    auto s = tri;
    std::sort(s.begin(), s.end());
    const auto ab = *k.edge_index(s[0], s[1]), bc = *k.edge_index(s[1], s[2]), ac = *k.edge_index(s[0], s[2]);
    for (Eigen::Index c = 0; c < h.h1; ++c) {
      const cplx d = h.h1_basis(bc, c) / g[ab] - h.h1_basis(ac, c) + h.h1_basis(ab, c);
      CHECK(std::abs(d) < 1e-10);
    }
  }
}

TEST_CASE("veech_pairing") {
  const auto four = SurfaceComplex::standard(0, 4);
  const cplx i(0.0, 1.0);
  const auto chi = Character::from_generators(four, {{"d0", i}, {"d1", i}, {"d2", -i}, {"d3", -i}});
  const auto report = holo::veech_pairing(four, chi);
  CHECK(report.matrix.rows() == 2);
  CHECK(report.hermitian_defect < 1e-10);
  CHECK(report.sigma_min > 1e-8 * report.sigma_max);
  CHECK(report.positive + report.negative == 2);
  const auto fine = four.barycentric();
  const auto refined = holo::veech_pairing(fine, chi.refined(four, fine));
  CHECK(refined.positive == report.positive);
  CHECK(refined.negative == report.negative);

  // Closed surfaces with trivial coefficients: the intersection form.
  const auto torus = SurfaceComplex::standard(1, 0);
  const auto t = holo::veech_pairing(torus, Character::trivial(torus));
  CHECK(t.positive == 1);
  CHECK(t.negative == 1);
  const auto genus2 = SurfaceComplex::standard(2, 0);
  const auto t2 = holo::veech_pairing(genus2, Character::trivial(genus2));
  CHECK(t2.positive == 2);
  CHECK(t2.negative == 2);

  // Random unitary characters nontrivial on every boundary circle.
  std::mt19937_64 rng(21);
  for (const auto& [g, b] : std::vector<std::pair<int, int>>{{0, 3}, {1, 1}, {1, 2}, {2, 1}}) {
    const auto k = SurfaceComplex::standard(g, b);
    for (int trial = 0; trial < 3; ++trial) {
      const auto c = Character::from_generators(k, random_generators(k, rng, true));
      bool generic = true;
      for (const auto& gen : k.generators())
        if (gen.name.starts_with('d')) generic = generic && std::abs(c.along(k, gen.vertices) - 1.0) > 1e-3;
      if (!generic) continue;
      const auto r = holo::veech_pairing(k, c);
      CHECK(r.hermitian_defect < 1e-10);
      CHECK(r.sigma_min > 1e-8 * r.sigma_max);
      CHECK(r.matrix.rows() == 2 * g + b - 2);
    }
  }

  // Once-punctured torus: the boundary holonomy is a commutator, hence 1, so
  // H^1_c -> H^1 vanishes and the form is identically zero.
  const auto punctured = SurfaceComplex::standard(1, 1);
  const auto theta = 2.0 * holo::kPi / 5.0;
  const auto rotation = Character::from_generators(punctured, {{"a", std::polar(1.0, theta)}, {"b", 1.0}});
  CHECK(code_of([&] { holo::veech_pairing(punctured, rotation); }) == holo::ErrorCode::DegeneratePairing);

  CHECK(code_of([&] { holo::veech_pairing(four, Character::from_generators(four, {{"d0", 2.0}, {"d1", 0.5}, {"d2", 1.0}})); }) ==
        holo::ErrorCode::NonUnitaryCharacter);
}
