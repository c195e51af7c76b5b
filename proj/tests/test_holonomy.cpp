#include <algorithm>
#include <random>

#include "doctest.h"
#include "holo/holonomy.hpp"

using holo::AffineSurfaceSpec;
using holo::cplx;
using holo::LoopPath;

namespace {

AffineSurfaceSpec sphere(std::vector<std::pair<cplx, cplx>> points) {
  AffineSurfaceSpec spec;
  for (auto [z, m] : points) spec.cone_points.push_back({z, m});
  return spec;
}

AffineSurfaceSpec torus(cplx tau, cplx lambda, std::vector<std::pair<cplx, cplx>> points) {
  AffineSurfaceSpec spec = sphere(std::move(points));
  spec.genus = 1;
  spec.tau = tau;
  spec.lambda = lambda;
  return spec;
}

// Closed polyline through an ellipse-like curve with wobble; 400 samples.
std::vector<cplx> blob(cplx center, double rx, double ry, double wobble) {
  std::vector<cplx> pts;
  const int n = 400;
  for (int k = 0; k <= n; ++k) {
    const double t = 2.0 * holo::kPi * (k % n) / n;
    const double r = 1.0 + wobble * std::sin(3.0 * t);
    pts.emplace_back(center.real() + rx * r * std::cos(t), center.imag() + ry * r * std::sin(t));
  }
  return pts;
}

}  // namespace

TEST_CASE("holonomy: small circles") {
  const auto spec = sphere({{0.0, 0.5}, {1.0, 0.5}, {{0.5, 1.0}, -3.0}});
  for (const auto& c : spec.cone_points) {
    const auto loop = LoopPath::circle(c.position, 0.2);
    CHECK(std::abs(holo::holonomy(spec, loop) - std::exp(holo::kTwoPiI * c.order)) < 1e-10);
    CHECK(std::abs(holo::turning_number(spec, loop) - (c.order + 1.0)) < 1e-10);
    const auto back = LoopPath::circle(c.position, 0.2, -1);
    CHECK(std::abs(holo::turning_number(spec, back) + (c.order + 1.0)) < 1e-10);
  }
  CHECK(std::abs(holo::holonomy(spec, LoopPath::circle({0.0, 0.0}, 0.2)) + 1.0) < 1e-10);
  CHECK(std::abs(holo::turning_number(spec, LoopPath::circle({0.0, 0.0}, 0.2)) - 1.5) < 1e-10);
  // Contractible loop in the complement.
  CHECK(std::abs(holo::holonomy(spec, LoopPath::circle({3.0, 3.0}, 0.5)) - 1.0) < 1e-12);
  CHECK(std::abs(holo::turning_number(spec, LoopPath::circle({3.0, 3.0}, 0.5)) - 1.0) < 1e-12);
}

TEST_CASE("holonomy: exp(2 pi i tau) = chi on sampled loops") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto spec = sphere({{{0.0, 0.0}, {0.3, 0.4}}, {{1.0, 0.2}, {-1.1, 0.1}},
                            {{-0.5, 0.9}, {-1.2, -0.5}}});
  for (int k = 0; k < 8; ++k) {
    const auto loop = LoopPath::samples(blob({u(rng), u(rng)}, 1.0 + 0.5 * k / 8.0, 1.3, 0.1));
    const cplx chi = holo::holonomy(spec, loop);
    const cplx tau = holo::turning_number(spec, loop);
    CHECK(std::abs(std::exp(holo::kTwoPiI * tau) - chi) < 1e-9 * std::max(1.0, std::abs(chi)));
  }
}

TEST_CASE("holonomy: multiplicative under concatenation") {
  const auto spec = sphere({{{-1.0, 0.0}, {0.3, 0.4}}, {{1.0, 0.0}, {0.2, -0.1}},
                            {{0.0, 3.0}, {-2.5, -0.3}}});
  // Two loops based at the origin, around -1 and 1 respectively.
  auto left = blob({-1.0, 0.0}, 1.0, 0.7, 0.0);
  auto right = blob({1.0, 0.0}, 1.0, 0.7, 0.0);
  // Rotate the right blob so both loops start at the origin.
  right.pop_back();
  std::rotate(right.begin(), right.begin() + 200, right.end());
  right.front() = 0.0;
  right.push_back(right.front());
  std::vector<cplx> both = left;
  both.insert(both.end(), right.begin() + 1, right.end());
  const cplx a = holo::holonomy(spec, LoopPath::samples(left));
  const cplx b = holo::holonomy(spec, LoopPath::samples(right));
  const cplx ab = holo::holonomy(spec, LoopPath::samples(both));
  CHECK(std::abs(ab - a * b) < 1e-9);
  CHECK(std::abs(a - std::exp(holo::kTwoPiI * cplx(0.3, 0.4))) < 1e-9);
}

TEST_CASE("velocity_winding") {
  CHECK(holo::velocity_winding(LoopPath::circle(0.0, 1.0)) == 1);
  CHECK(holo::velocity_winding(LoopPath::circle(0.0, 1.0, -1)) == -1);
  CHECK(holo::velocity_winding(LoopPath::lattice_a(0.1)) == 0);
  CHECK(holo::velocity_winding(LoopPath::samples(blob(0.0, 2.0, 1.0, 0.2))) == 1);
  // Figure eight: velocity winding 0.
  std::vector<cplx> eight;
  for (int k = 0; k <= 400; ++k) {
    const double t = 2.0 * holo::kPi * (k % 400) / 400.0;
    eight.emplace_back(std::sin(t), std::sin(t) * std::cos(t));
  }
  CHECK(holo::velocity_winding(LoopPath::samples(eight)) == 0);
}

TEST_CASE("turning number difference under exponential action") {
  // tau' - tau = (1 / 2 pi i) integral of alpha = sum of enclosed a_j.
  const auto spec = sphere({{{0.0, 0.0}, {0.3, 0.4}}, {{1.0, 0.2}, {-1.1, 0.1}},
                            {{-0.5, 0.9}, {-1.2, -0.5}}});
  const std::vector<cplx> a = {cplx(0.4, -0.2), cplx(-0.7, 0.3), cplx(0.3, -0.1)};
  const auto moved = holo::exponential_action(spec, a);
  const auto loop = LoopPath::samples(blob({0.5, 0.1}, 0.9, 0.6, 0.05));  // encloses c0, c1
  const cplx diff = holo::turning_number(moved, loop) - holo::turning_number(spec, loop);
  CHECK(std::abs(diff - (a[0] + a[1])) < 1e-10);
}

TEST_CASE("holonomy: genus-1 lattice loops") {
  const cplx tau(0.2, 1.1), lambda(0.3, -0.4);
  const auto flat = torus(tau, lambda, {{0.0, 0.0}});
  CHECK(std::abs(holo::holonomy(flat, LoopPath::lattice_a({0.4, 0.3})) - std::exp(-lambda)) < 1e-11);
  CHECK(std::abs(holo::holonomy(flat, LoopPath::lattice_b({0.4, 0.3})) - std::exp(-lambda * tau)) < 1e-11);

  // Integer orders: chi(a) = exp(-lambda - eta1 sum m c), chi(b) = exp(-lambda tau - eta2 sum m c).
  const cplx c(0.45, 0.35);
  const auto spec = torus(tau, lambda, {{0.0, 1.0}, {c, -1.0}});
  const holo::LatticeData lattice(tau);
  const cplx mc = -c;
  for (const cplx base : {cplx(0.3, 0.7), cplx(0.8, 0.2)}) {
    CHECK(std::abs(holo::holonomy(spec, LoopPath::lattice_a(base)) -
                   std::exp(-lambda - lattice.eta1() * mc)) < 1e-10);
    CHECK(std::abs(holo::holonomy(spec, LoopPath::lattice_b(base)) -
                   std::exp(-lambda * tau - lattice.eta2() * mc)) < 1e-10);
  }
}

TEST_CASE("character_on_basis") {
  const auto spec = sphere({{0.0, 0.5}, {1.0, 0.5}, {{0.5, 1.0}, -3.0}});
  const auto report = holo::character_on_basis(spec, holo::standard_basis(spec));
  REQUIRE(report.ids.size() == 3);
  CHECK(report.ids[0] == "c0");
  CHECK(std::abs(report.chi[0] + 1.0) < 1e-10);
  CHECK(std::abs(report.tau[0] - 1.5) < 1e-10);
  CHECK(report.consistent);
  CHECK_FALSE(holo::has_trivial_holonomy(report));

  const auto t = torus({0.1, 0.9}, {0.2, 0.1}, {{0.0, cplx(0.3, 0.2)}, {{0.5, 0.4}, cplx(-0.3, -0.2)}});
  const auto basis = holo::standard_basis(t);
  REQUIRE(basis.size() == 4);
  CHECK(basis[2].id == "a");
  CHECK(basis[3].id == "b");
  const auto tr = holo::character_on_basis(t, basis);
  CHECK(tr.consistent);
  CHECK(std::abs(tr.cone_product - 1.0) < 1e-9);
}

TEST_CASE("is_translation_surface") {
  using holo::TranslationType;
  CHECK(holo::is_translation_surface(sphere({{0.0, -1.0}, {1.0, -1.0}})) == TranslationType::InfiniteArea);
  CHECK(holo::is_translation_surface(sphere({{0.0, 0.5}, {1.0, 0.5}, {{0.5, 1.0}, -3.0}})) ==
        TranslationType::NotTranslation);
  CHECK(holo::is_translation_surface(torus({0.0, 1.0}, 0.0, {{0.0, 0.0}})) == TranslationType::FiniteArea);
  CHECK(holo::is_translation_surface(torus({0.0, 1.0}, 0.3, {{0.0, 0.0}})) == TranslationType::NotTranslation);
  CHECK(holo::to_string(TranslationType::FiniteArea) == "finite_area");
}
