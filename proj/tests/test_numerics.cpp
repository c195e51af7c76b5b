#include <cmath>
#include <random>

#include "doctest.h"
#include "holo/error.hpp"
#include "holo/numerics.hpp"

using holo::cplx;
using holo::kTwoPiI;
using holo::LoopPath;

TEST_CASE("integrate: Cauchy integrals on circles") {
  const auto unit = LoopPath::circle({0.0, 0.0}, 1.0);
  CHECK(std::abs(holo::integrate([](cplx z) { return 1.0 / z; }, unit) - kTwoPiI) < 1e-10);
  CHECK(std::abs(holo::integrate([](cplx z) { return z; }, unit)) < 1e-10);
  const auto big = LoopPath::circle({0.0, 0.0}, 2.0);
  CHECK(std::abs(holo::integrate([](cplx z) { return 1.0 / (z - 0.5); }, big) - kTwoPiI) < 1e-10);
}

TEST_CASE("integrate: orientation reversal negates") {
  const auto f = [](cplx z) { return std::exp(z) / (z - cplx(0.1, 0.2)); };
  const auto loop = LoopPath::circle({0.0, 0.0}, 1.3);
  const cplx forward = holo::integrate(f, loop);
  const cplx backward = holo::integrate(f, loop.reversed());
  CHECK(std::abs(forward + backward) < 1e-10);

  std::vector<cplx> pts;
  for (int k = 0; k <= 40; ++k) pts.push_back(std::polar(1.0 + 0.2 * std::cos(3.0 * k * holo::kPi / 20), k * holo::kPi / 20));
  pts.back() = pts.front();
  const auto poly = LoopPath::samples(pts);
  CHECK(std::abs(holo::integrate(f, poly) + holo::integrate(f, poly.reversed())) < 1e-10);
}

TEST_CASE("integrate: homotopic loops agree for holomorphic integrands") {
  const auto f = [](cplx z) { return 1.0 / (z * z - 4.0) + std::sin(z); };
  // Circle of radius 1 and a square of side 2.4 around 0 both avoid +-2.
  const cplx circle = holo::integrate(f, LoopPath::circle({0.0, 0.0}, 1.0));
  std::vector<cplx> square;
  const cplx corners[] = {{1.2, -1.2}, {1.2, 1.2}, {-1.2, 1.2}, {-1.2, -1.2}};
  for (int side = 0; side < 4; ++side) {
    for (int k = 0; k < 8; ++k) {
      square.push_back(corners[side] + (corners[(side + 1) % 4] - corners[side]) * (k / 8.0));
    }
  }
  square.push_back(square.front());
  CHECK(std::abs(circle - holo::integrate(f, LoopPath::samples(square))) < 1e-10);
}

TEST_CASE("integrate: errors") {
  const auto through = LoopPath::circle({1.0, 0.0}, 1.0);  // passes through 0
  // A node of the rule hits z = 0 only by accident, so use an integrand that
  // is non-finite on a whole arc.
  const auto bad = [](cplx z) { return z.real() < 0.5 ? cplx(INFINITY, 0.0) : z; };
  CHECK_THROWS_AS(holo::integrate(bad, through), holo::Error);
  try {
    holo::integrate(bad, through);
  } catch (const holo::Error& e) {
    CHECK(e.code() == holo::ErrorCode::NonFiniteEvaluation);
  }
  holo::Quadrature tight;
  tight.max_refinements = 0;
  tight.abs_tol = 1e-300;
  const auto rough = [](cplx z) { return std::sqrt(std::abs(z.real() - 0.3)) + 0.0 * z; };
  try {
    holo::integrate(rough, holo::Path({holo::LineSegment{{0.0, 0.0}, {1.0, 0.0}}}), tight);
    FAIL("expected ToleranceNotReached");
  } catch (const holo::Error& e) {
    CHECK(e.code() == holo::ErrorCode::ToleranceNotReached);
  }
  holo::Quadrature invalid;
  invalid.abs_tol = 0.0;
  CHECK_THROWS_AS(invalid.validate(), holo::Error);
}

TEST_CASE("continuous_log") {
  std::vector<cplx> turn;
  for (int k = 0; k <= 64; ++k) turn.push_back(std::polar(1.0, 2.0 * holo::kPi * k / 64));
  auto logs = holo::continuous_log(turn);
  CHECK(std::abs(logs.back() - logs.front() - kTwoPiI) < 1e-12);

  std::vector<cplx> ones(10, cplx(1.0, 0.0));
  for (const cplx v : holo::continuous_log(ones)) CHECK(std::abs(v) == 0.0);

  std::vector<cplx> clockwise;
  for (int k = 0; k <= 64; ++k) clockwise.push_back(std::polar(1.0, -2.0 * holo::kPi * k / 64));
  logs = holo::continuous_log(clockwise);
  CHECK(std::abs(logs.back() - logs.front() + kTwoPiI) < 1e-12);

  const std::vector<cplx> jump = {{1.0, 0.0}, {-1.0, 0.0}};
  CHECK_THROWS_AS(holo::continuous_log(jump), holo::Error);
}

TEST_CASE("cauchy_residue") {
  const cplx p(0.3, -0.2);
  CHECK(std::abs(holo::cauchy_residue([p](cplx z) { return 1.0 / (z - p); }, p, 0.5) - 1.0) < 1e-10);
  CHECK(std::abs(holo::cauchy_residue([](cplx z) { return std::exp(z); }, p, 0.5)) < 1e-10);

  // (z - c1) / ((z - c2)(z - c3)^2) at c2: partial fractions give
  // (c2 - c1) / (c2 - c3)^2.
  const cplx c1(0.0, 1.0), c2(1.0, 0.0), c3(-1.0, 0.5);
  const auto f = [&](cplx z) { return (z - c1) / ((z - c2) * (z - c3) * (z - c3)); };
  const cplx expected = (c2 - c1) / ((c2 - c3) * (c2 - c3));
  CHECK(std::abs(holo::cauchy_residue(f, c2, 0.5) - expected) < 1e-10);
  // Radius independence inside the punctured disk (|c2 - c3| ~ 2.06).
  CHECK(std::abs(holo::cauchy_residue(f, c2, 0.2) - holo::cauchy_residue(f, c2, 1.5)) < 1e-10);
}

TEST_CASE("gauss-legendre rule integrates polynomials to degree 39") {
  const auto& rule = holo::gauss_legendre_20();
  double sum_w = 0.0, moment = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    sum_w += rule.weights[k];
    moment += rule.weights[k] * std::pow(rule.nodes[k], 38);
  }
  CHECK(sum_w == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(moment == doctest::Approx(2.0 / 39.0).epsilon(1e-13));
}

TEST_CASE("path geometry") {
  const holo::Path line({holo::LineSegment{{0.0, 0.0}, {2.0, 0.0}}});
  CHECK(line.distance_to({1.0, 1.0}) == doctest::Approx(1.0));
  CHECK(line.distance_to({3.0, 0.0}) == doctest::Approx(1.0));
  const holo::Path arc({holo::ArcSegment{{0.0, 0.0}, 1.0, 0.0, holo::kPi / 2}});
  CHECK(arc.distance_to({0.0, 0.0}) == doctest::Approx(1.0));
  CHECK(arc.distance_to({-2.0, 0.0}) == doctest::Approx(std::sqrt(5.0)));
  const auto pts = line.sample(0.25);
  CHECK(pts.size() == 9);
  CHECK(std::abs(line.reversed().start() - cplx(2.0, 0.0)) == 0.0);
  CHECK_THROWS_AS(LoopPath::samples({{0.0, 0.0}, {1.0, 0.0}}), holo::Error);
}
