#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fspec/error.hpp"
#include "fspec/forcing.hpp"
#include "oracles.hpp"

using namespace fspec;

namespace {

double quad(const Forcing& x, double lo, double hi) {
  return oracle::simpson([&](double t) { return x(t); }, lo, hi, 400000);
}

}  // namespace

TEST_CASE("closed-form integrals agree with Simpson quadrature") {
  const auto g = Forcing::gaussian(0.3, 0.7, 1.5);
  CHECK(g.integral() == doctest::Approx(quad(g, -10, 10)).epsilon(1e-10));
  // Kinks at the ends and the peak fall on grid points.
  const auto tri = Forcing::triangle(0.0, 1.0, 2.0);
  CHECK(tri.integral() == doctest::Approx(quad(tri, -1, 2)).epsilon(1e-10));
  const auto e = Forcing::exp_cut(0.0, 2.0, 3.0);
  CHECK(e.integral() == doctest::Approx(quad(e, 0, 40)).epsilon(1e-9));
  const auto tab = Forcing::table({0.0, 0.5, 2.0}, {1.0, 3.0, 0.0});
  CHECK(tab.integral() == doctest::Approx(quad(tab, 0, 2)).epsilon(1e-8));
  const auto sum = 2.0 * g + tri;
  CHECK(sum.integral() == doctest::Approx(2.0 * 1.5 + 2.0));
}

TEST_CASE("pointwise shapes") {
  const auto tri = Forcing::triangle(0.0, 1.0, 1.0);
  CHECK(tri(0.5) == doctest::Approx(2.0));
  CHECK(tri(0.25) == doctest::Approx(1.0));
  CHECK(tri(-0.1) == 0.0);
  CHECK(tri(1.0) == 0.0);
  const auto g = Forcing::gaussian(0.0, 1.0);
  CHECK(g(0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)));
  const auto e = Forcing::exp_cut(1.0, 0.5, 2.0);
  CHECK(e(0.99) == 0.0);
  CHECK(e(3.0) == doctest::Approx(2.0 * std::exp(-1.0)));
  const auto tab = Forcing::table({0.0, 1.0}, {2.0, 4.0});
  CHECK(tab(0.25) == doctest::Approx(2.5));
  CHECK(tab(1.5) == 0.0);
  CHECK(Forcing{}(1.0) == 0.0);
}

TEST_CASE("left masses") {
  const auto tri = Forcing::triangle(0.0, 2.0, 1.0);
  CHECK(tri.abs_mass_left_of(1.0) == doctest::Approx(0.5));
  CHECK(tri.abs_mass_left_of(0.5) == doctest::Approx(quad(tri, 0.0, 0.5)).epsilon(1e-10));
  const auto g = Forcing::gaussian(0.0, 1.0);
  CHECK(g.abs_mass_left_of(0.0) == doctest::Approx(0.5));
  CHECK(g.abs_mass_left_of(-1.0) == doctest::Approx(quad(g, -12, -1)).epsilon(1e-9));
  CHECK(tri.vanishes_on_negative_axis());
  CHECK_FALSE(g.vanishes_on_negative_axis());
}

TEST_CASE("decay certificates") {
  CHECK(Forcing::triangle(0, 1).certificate().kind == DecayKind::Compact);
  CHECK(Forcing::gaussian(0, 1).certificate().kind == DecayKind::Compact);
  const auto e = Forcing::exp_cut(0.0, 0.75, 2.0) + Forcing::exp_cut(1.0, 2.0);
  CHECK(e.certificate().kind == DecayKind::Exponential);
  CHECK(e.certificate().rate == 0.75);
  auto t = Forcing::triangle(0, 1);
  t.set_certificate({DecayKind::None});
  CHECK(t.certificate().kind == DecayKind::None);
}

TEST_CASE("envelope constant") {
  const auto g = Forcing::gaussian(0.0, 1.0);
  // sup (t^2 + 1) exp(-t^2/2) / sqrt(2 pi) is at t = 1.
  CHECK(g.envelope_constant() == doctest::Approx(2.0 * std::exp(-0.5) / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-6));
}

TEST_CASE("shift, scale and sum") {
  const auto g = Forcing::gaussian(0.0, 1.0);
  const auto s = g.shifted(2.0);
  CHECK(s(2.3) == doctest::Approx(g(0.3)));
  CHECK((3.0 * g)(0.4) == doctest::Approx(3.0 * g(0.4)));
  CHECK((0.0 * g).is_zero());
  CHECK((g + s)(1.0) == doctest::Approx(g(1.0) + s(1.0)));
}

TEST_CASE("invalid shapes") {
  CHECK_THROWS_AS(Forcing::gaussian(0, 0), Error);
  CHECK_THROWS_AS(Forcing::triangle(1, 1), Error);
  CHECK_THROWS_AS(Forcing::exp_cut(0, -1), Error);
  CHECK_THROWS_AS(Forcing::table({0, 0}, {1, 1}), Error);
}
