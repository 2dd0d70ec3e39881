#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "fspec/error.hpp"
#include "fspec/renewal.hpp"
#include "oracles.hpp"

using namespace fspec;

namespace {

RenewalCoefficients two_step() { return {{0.0, 0.5}, {0.5, 0.0}, {}}; }

RenewalCoefficients golden() {
  return {{0.3, 0.0}, {0.0, 0.7}, {1.0, std::numbers::phi}};
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("discrete recursion matches a hand-rolled loop and its limits") {
  const auto c = two_step();
  const std::vector<double> x1{1.0}, x2;
  const auto z = solve_discrete(c, x1, x2, 400);
  // z1_n = x_n + z2_{n-1}/2 + z1_{n-2}/2, z2_n = z1_{n-1}/2 + z2_{n-2}/2
  std::vector<double> a(401, 0.0), b(401, 0.0);
  for (std::size_t n = 0; n <= 400; ++n) {
    a[n] = (n == 0 ? 1.0 : 0.0) + (n >= 1 ? 0.5 * b[n - 1] : 0.0) + (n >= 2 ? 0.5 * a[n - 2] : 0.0);
    b[n] = (n >= 1 ? 0.5 * a[n - 1] : 0.0) + (n >= 2 ? 0.5 * b[n - 2] : 0.0);
  }
  for (std::size_t n = 0; n <= 400; ++n) {
    CHECK(z.z1[n] == a[n]);
    CHECK(z.z2[n] == b[n]);
  }
  const auto L = discrete_limits(c, x1, x2);
  CHECK(L.omega == 0.5);
  CHECK(L.chi == 0.5);
  CHECK(L.J == 1.5);
  CHECK(L.z1_even == doctest::Approx(2.0 / 3));
  CHECK(L.z1_odd == doctest::Approx(0.0));
  CHECK(L.z2_even == doctest::Approx(0.0));
  CHECK(L.z2_odd == doctest::Approx(2.0 / 3));
  CHECK(std::abs(a[400] - 2.0 / 3) < 1e-12);
  CHECK(std::abs(a[399]) < 1e-12);
  CHECK(std::abs(b[399] - 2.0 / 3) < 1e-12);
}

TEST_CASE("zero forcing gives the zero sequence") {
  const auto z = solve_discrete(two_step(), std::vector<double>{}, std::vector<double>{}, 50);
  for (double v : z.z1) CHECK(v == 0.0);
  for (double v : z.z2) CHECK(v == 0.0);
}

TEST_CASE("coefficient invariants") {
  const std::vector<double> x{1.0};
  CHECK(code_of([&] { solve_discrete({{1.0}, {0.0}, {}}, x, x, 5); }) ==
        ErrorCode::CoefficientInvariantViolation);
  CHECK(code_of([&] { solve_discrete({{0.5, 0.5}, {0.0, 0.1}, {}}, x, x, 5); }) ==
        ErrorCode::CoefficientInvariantViolation);
  // lags 2 and 4 only: gcd 2
  CHECK(code_of([&] { solve_discrete({{0, 0.5, 0, 0}, {0, 0, 0, 0.5}, {}}, x, x, 5); }) ==
        ErrorCode::CoefficientInvariantViolation);
  CHECK(code_of([&] { discrete_limits({{0.5, 0.0}, {0.0, 0.5}, {}}, x, x); }) ==
        ErrorCode::NonDegenerateParity);
}

TEST_CASE("alternating mass") {
  const auto c = two_step();
  const std::vector<double> x1{1.0, 0.3, 0.2}, one{1.0}, shifted{0.0, 1.0};
  CHECK(discrete_limits(c, x1, x1).chi == 0.0);
  const double single = discrete_limits(c, one, std::vector<double>{}).chi;
  const double pair = discrete_limits(c, one, shifted).chi;
  // 1/2 sum (-1)^k (x1_k - x2_k) summed directly
  CHECK(single == doctest::Approx(0.5));
  CHECK(pair == doctest::Approx(2.0 * single));
}

TEST_CASE("generating identity and unit-root factorisation") {
  const RenewalCoefficients c{{0.0, 0.2, 0.0, 0.1}, {0.4, 0.0, 0.3, 0.0}, {}};
  const auto q = unit_root_quotient(c);
  CHECK(std::abs(q.remainder) < 1e-15);
  for (int i = 0; i < 64; ++i) {
    const auto w = std::polar(1.0, 2.0 * std::numbers::pi * i / 64.0);
    CHECK(std::abs(generating_identity_residual(c, w)) < 1e-12);
    CHECK(std::abs((1.0 - w) * eval_polynomial(q.q, w) - characteristic(c, w, 1.0)) < 1e-12);
  }
  const RenewalCoefficients bad{{0.5, 0.0}, {0.0, 0.5}, {}};
  CHECK(std::abs(generating_identity_residual(bad, {0.0, 1.0})) > 0.1);
}

TEST_CASE("periodic limit profile") {
  const auto c = two_step();
  const auto bump = Forcing::triangle(0.0, 1.0);
  const Forcing zero;
  CHECK(periodic_limit_s(c, bump, zero, 0.5) == doctest::Approx(bump(0.5) * 2.0 / 3));
  for (double t : {0.1, 0.7, 1.3, 1.9})
    CHECK(periodic_limit_s(c, bump, bump, t + 2.0) == doctest::Approx(periodic_limit_s(c, bump, bump, t)));
  const auto x2 = bump.shifted(1.0);
  for (double t : {0.25, 0.5, 1.5}) {
    double direct = 0.0;
    for (int k = -5; k <= 5; ++k) direct += bump(t - 2.0 * k);
    CHECK(periodic_limit_s(c, bump, x2, t) == doctest::Approx(2.0 / 1.5 * direct));
  }
  auto uncertified = bump;
  uncertified.set_certificate({DecayKind::None});
  CHECK(code_of([&] { periodic_limit_s(c, uncertified, zero, 0.5); }) == ErrorCode::SeriesDivergence);
}

TEST_CASE("lattice fibers reproduce the discrete recursion exactly") {
  const auto c = two_step();
  const auto bump = Forcing::triangle(0.0, 1.0);
  const double phases[] = {0.5};
  const auto sol = solve_lattice(c, bump, bump, phases, 40.0);
  const auto f = lattice_fiber(bump, 0.5, 39);
  const auto z = solve_discrete(c, f, f, 39);
  REQUIRE(sol.t.size() == 40);
  for (std::size_t n = 0; n < 40; ++n) {
    CHECK(sol.t[n] == 0.5 + static_cast<double>(n));
    CHECK(sol.z1[n] == z.z1[n]);
    CHECK(sol.z2[n] == z.z2[n]);
  }
}

TEST_CASE("lattice solution approaches the periodic profile") {
  const auto c = two_step();
  const auto bump = Forcing::triangle(0.0, 1.0);
  const double phases[] = {0.0, 0.25, 0.5, 0.75};
  const auto sol = solve_lattice(c, bump, bump, phases, 400.0);
  CHECK(sol.tail_discrepancy <= 1e-6);
  const auto zero = solve_lattice(c, Forcing{}, Forcing{}, phases, 20.0);
  for (double v : zero.z1) CHECK(v == 0.0);
}

TEST_CASE("lattice preconditions") {
  const auto c = two_step();
  const double phases[] = {0.0};
  CHECK(code_of([&] { solve_lattice(c, Forcing::gaussian(0, 1), Forcing{}, phases, 10); }) ==
        ErrorCode::ForcingOnNegativeAxis);
  CHECK(code_of([&] {
          solve_lattice({{0.5, 0.0}, {0.0, 0.5}, {}}, Forcing::triangle(0, 1), Forcing{}, phases, 10);
        }) == ErrorCode::NonDegenerateParity);
  const double bad[] = {1.0};
  CHECK(code_of([&] { solve_lattice(c, Forcing::triangle(0, 1), Forcing{}, bad, 10); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("non-arithmetic limit constants") {
  const auto c = golden();
  const auto g = Forcing::gaussian(0.0, 1.0);
  const auto L = nonarithmetic_limit(c, g, Forcing{});
  CHECK(L.J == doctest::Approx(0.3 + 0.7 * std::numbers::phi));
  CHECK(L.z1 == doctest::Approx(1.0 / (2.0 * L.J)));
  CHECK(L.z1 == doctest::Approx(0.34901).epsilon(1e-4));
  const double sq = oracle::simpson([&](double t) { return g(t); }, -12, 12, 20000);
  CHECK(L.z1 == doctest::Approx(sq / (2.0 * L.J)).epsilon(1e-10));
  CHECK(nonarithmetic_limit(c, g, -1.0 * g).z1 == doctest::Approx(0.0));

  // Only u + v matters for J.
  const RenewalCoefficients other{{0.1, 0.2}, {0.2, 0.5}, {1.0, std::numbers::phi}};
  const auto b = Forcing::triangle(0, 1);
  CHECK(nonarithmetic_limit(other, b, b).z1 == doctest::Approx(nonarithmetic_limit(c, b, b).z1));
}

TEST_CASE("single component with unit lag telescopes") {
  const RenewalCoefficients c{{1.0}, {0.0}, {1.0}};
  const auto b = Forcing::triangle(0.0, 1.0, 1.0);
  NonArithmeticOptions o;
  o.t_min = -1.0;
  o.t_max = 20.0;
  const auto sol = solve_nonarithmetic(c, b, Forcing{}, o);
  CHECK(sol.predicted1.back() == doctest::Approx(1.0));
  CHECK(sol.predicted2.back() == 0.0);
  for (std::size_t i = 0; i < sol.t.size(); i += 37) {
    double direct = 0.0;
    for (int k = 0; k < 30; ++k) direct += b(sol.t[i] - k);
    CHECK(sol.z1[i] == doctest::Approx(direct).epsilon(1e-12));
  }
  // Integer shifts of a width-2 hat sum to its mass.
  const auto hat = Forcing::triangle(0.0, 2.0, 1.0);
  const auto flat = solve_nonarithmetic(c, hat, Forcing{}, o);
  CHECK(flat.tail_discrepancy < 1e-12);
}

TEST_CASE("non-arithmetic march: positivity, split agreement, preconditions") {
  const auto c = golden();
  const auto g = Forcing::gaussian(0.0, 1.0);
  NonArithmeticOptions o;
  o.t_max = 60.0;
  const auto sol = solve_nonarithmetic(c, g, Forcing{}, o);
  for (std::size_t i = 0; i < sol.t.size(); ++i) {
    CHECK(sol.z1[i] >= -1e-12);
    CHECK(sol.z2[i] >= -1e-12);
  }
  const auto split = solve_nonarithmetic_split(c, g, Forcing{}, o);
  double diff = 0.0;
  for (std::size_t i = 0; i < sol.t.size(); ++i)
    diff = std::max({diff, std::abs(sol.z1[i] - split.z1[i]), std::abs(sol.z2[i] - split.z2[i])});
  CHECK(diff < 1e-8);

  NonArithmeticOptions coarse = o;
  coarse.step = 0.3;
  CHECK(code_of([&] { solve_nonarithmetic(c, g, Forcing{}, coarse); }) == ErrorCode::UnstableStep);
  NonArithmeticOptions narrow = o;
  narrow.t_min = -3.0;
  CHECK(code_of([&] { solve_nonarithmetic(c, g, Forcing{}, narrow); }) == ErrorCode::EnvelopeTooWide);
  CHECK(code_of([&] { solve_nonarithmetic(two_step(), g, Forcing{}, o); }) ==
        ErrorCode::CoefficientInvariantViolation);
}

TEST_CASE("eta is positive and decays like J / t^2") {
  const auto c = golden();
  for (double t = -50; t <= 50; t += 0.37) CHECK(eta(c, t) > 0.0);
  const auto eb = eta_bound(c, 1.0);
  CHECK(eb.min_eta > 0.0);
  CHECK(eb.tail_ratio_plus == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(eb.tail_ratio_minus == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(eb.C >= std::numbers::pi / c.mean_lag());
  // direct oracle: eta from atan differences
  const double t = 0.8;
  const double direct = 0.3 * (std::atan(t) - std::atan(t - 1.0)) +
                        0.7 * (std::atan(t) - std::atan(t - std::numbers::phi));
  CHECK(eta(c, t) == doctest::Approx(direct).epsilon(1e-14));
}

TEST_CASE("a-priori bound holds for the golden-ratio solve and its rescaled delays") {
  for (double scale : {1.0, 2.5}) {
    auto c = golden();
    for (auto& l : c.delays) l *= scale;
    const auto g = Forcing::gaussian(0.0, 1.0);
    const double Pi = g.envelope_constant();
    const auto eb = eta_bound(c, Pi);
    NonArithmeticOptions o;
    o.t_max = 80.0;
    const auto sol = solve_nonarithmetic(c, g, Forcing{}, o);
    double sup = 0.0;
    for (std::size_t i = 0; i < sol.t.size(); ++i)
      sup = std::max({sup, std::abs(sol.z1[i]), std::abs(sol.z2[i])});
    CHECK(sup <= eb.bound + 1e-6);
  }
}
