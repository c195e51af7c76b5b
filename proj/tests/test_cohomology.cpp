#include "doctest.h"
#include "holo/cohomology.hpp"
#include "holo/error.hpp"

using holo::AffineSurfaceSpec;
using holo::cplx;
using holo::LineBundleDims;

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

AffineSurfaceSpec make(int genus, cplx lambda, std::vector<std::pair<cplx, cplx>> points) {
  AffineSurfaceSpec spec;
  spec.genus = genus;
  spec.tau = {0.1, 1.05};
  spec.lambda = lambda;
  for (auto [z, m] : points) spec.cone_points.push_back({z, m});
  return spec;
}

}  // namespace

TEST_CASE("line_bundle_dims") {
  CHECK(holo::line_bundle_dims(0, -2) == LineBundleDims{0, 1});
  CHECK(holo::line_bundle_dims(0, 2) == LineBundleDims{3, 0});
  CHECK(holo::line_bundle_dims(0, -1) == LineBundleDims{0, 0});
  CHECK(holo::line_bundle_dims(1, 0, true) == LineBundleDims{1, 1});
  CHECK(holo::line_bundle_dims(1, 0, false) == LineBundleDims{0, 0});
  CHECK(holo::line_bundle_dims(1, 3) == LineBundleDims{3, 0});
  CHECK(holo::line_bundle_dims(1, -2) == LineBundleDims{0, 2});
  // Riemann-Roch: h0 - h1 = d + 1 - g.
  for (int g = 0; g <= 1; ++g) {
    for (int d = -6; d <= 6; ++d) {
      const auto r = holo::line_bundle_dims(g, d, true);
      CHECK(r.h0 - r.h1 == d + 1 - g);
    }
  }
  CHECK(code_of([] { holo::line_bundle_dims(2, 0); }) == holo::ErrorCode::GenusUnsupported);
}

TEST_CASE("dim_H1_L") {
  CHECK(holo::dim_H1_L(0, 4) == 4);
  CHECK(holo::dim_H1_L(1, 1) == 2);
  CHECK(holo::dim_H1_L(1, 2) == 4);
  CHECK(holo::dim_H1_L(1, 0) == 2);
  for (const auto& [g, n] : std::vector<std::pair<int, int>>{{0, 3}, {0, 4}, {0, 5}, {0, 9}, {1, 1}, {1, 2}, {1, 3}, {1, 7}}) {
    CHECK(holo::dim_H1_L(g, n) == 4 * g - 4 + 2 * n);
    const auto r = holo::coderivative_rows(g, n);
    CHECK(r.dim_H1_L == r.h0_omega_C + r.h1_T_minus_C);
    CHECK(r.dim_H1_L == r.dim_moduli);
    CHECK(r.top_exact);
    CHECK(r.bottom_exact);
  }
  for (const auto& [g, n] : std::vector<std::pair<int, int>>{{0, 0}, {0, 1}, {0, 2}}) {
    CHECK(code_of([g = g, n = n] { holo::dim_H1_L(g, n); }) == holo::ErrorCode::UnstableConfiguration);
  }
  CHECK(code_of([] { holo::dim_H1_L(2, 1); }) == holo::ErrorCode::GenusUnsupported);
}

TEST_CASE("coderivative_rows") {
  const auto a = holo::coderivative_rows(1, 1);
  CHECK(a.top == std::array{1, 2, 1});
  CHECK(a.bottom == std::array{1, 2, 1});
  const auto b = holo::coderivative_rows(0, 4);
  CHECK(b.top == std::array{0, 3, 3});
  CHECK(b.bottom == std::array{1, 4, 3});
  const auto c = holo::coderivative_rows(0, 3);
  CHECK(c.top == std::array{0, 2, 2});
  CHECK(c.bottom == std::array{0, 2, 2});
  const auto d = holo::coderivative_rows(1, 0);
  CHECK(d.top == std::array{1, 2, 1});
  CHECK(d.bottom_exact);
}

TEST_CASE("trans_dims") {
  using holo::TransDims;
  const auto torus = make(1, 0.0, {{0.0, 0.0}});
  const auto t = holo::trans_dims(torus);
  CHECK(t == TransDims{0, 2, 1});
  CHECK(holo::trans_dims(make(1, 0.4, {{0.0, 0.0}})).h2 == 0);

  const auto five = make(0, 0.0, {{0.0, 0.5}, {1.0, 0.5}, {{0.3, 1.1}, 1.0}, {{-0.8, 0.6}, -2.0}, {{0.5, -0.9}, -2.0}});
  CHECK(holo::trans_dims(five) == TransDims{0, 1, 0});
  const auto three = make(0, 0.0, {{0.0, 0.5}, {1.0, 0.5}, {{0.5, 1.0}, -3.0}});
  CHECK(holo::trans_dims(three) == TransDims{0, 0, 0});

  // Translation surfaces with poles.
  const auto two_poles = make(0, 0.0, {{0.0, -1.0}, {1.0, -1.0}});
  CHECK(holo::trans_dims(two_poles) == TransDims{1, 0, 1});
  const auto wp = make(1, 0.0, {{0.0, -2.0}, {{0.31, 0.22}, 1.0}, {{-0.31, -0.22}, 1.0}});
  CHECK(holo::trans_dims(wp) == TransDims{0, 3, 1});

  for (const auto& spec : {torus, five, three, two_poles, wp, make(1, 0.4, {{0.0, 0.0}})}) {
    CHECK(holo::trans_euler_defect(spec, holo::trans_dims(spec)) == 0);
  }
}
