// Randomised and structural properties, runnable on their own.

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "fspec/renewal.hpp"
#include "fspec/spectral.hpp"
#include "oracles.hpp"

using namespace fspec;

namespace {

struct DelayInstance {
  RenewalCoefficients c;
  Forcing x1, x2;
};

Forcing random_nonnegative_forcing(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 2), terms(1, 3);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  Forcing f;
  const int n = terms(rng);
  for (int i = 0; i < n; ++i) {
    switch (kind(rng)) {
      case 0: f += Forcing::gaussian(-2.0 + 7.0 * u01(rng), 0.3 + 1.7 * u01(rng), 0.1 + u01(rng)); break;
      case 1: {
        const double l = 6.0 * u01(rng);
        f += Forcing::triangle(l, l + 0.2 + 2.0 * u01(rng), 0.1 + u01(rng));
        break;
      }
      default: f += Forcing::exp_cut(3.0 * u01(rng), 0.5 + 2.5 * u01(rng), 0.1 + u01(rng)); break;
    }
  }
  return f;
}

DelayInstance random_delay_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> size(2, 4);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const std::size_t N = size(rng);
  DelayInstance in;
  in.c.u.resize(N);
  in.c.v.resize(N);
  in.c.delays.resize(N);
  double total = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    in.c.u[k] = u01(rng);
    in.c.v[k] = u01(rng);
    in.c.delays[k] = 0.5 + 2.5 * u01(rng);
    total += in.c.u[k] + in.c.v[k];
  }
  for (std::size_t k = 0; k < N; ++k) {
    in.c.u[k] /= total;
    in.c.v[k] /= total;
  }
  // Put the rounding residue on the last weight so the sum is 1 to the last bit.
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < N; ++k) s += in.c.u[k] + in.c.v[k];
  in.c.v[N - 1] = 1.0 - s - in.c.u[N - 1];
  in.x1 = random_nonnegative_forcing(rng);
  in.x2 = random_nonnegative_forcing(rng);
  return in;
}

NonArithmeticOptions march_options() {
  NonArithmeticOptions o;
  o.t_min = -30.0;
  o.t_max = 40.0;
  return o;
}

}  // namespace

TEST_CASE("positivity and the a-priori bound on random delay systems") {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 50; ++trial) {
    CAPTURE(trial);
    const auto in = random_delay_instance(rng);
    const auto sol = solve_nonarithmetic(in.c, in.x1, in.x2, march_options());
    double lowest = 0.0, sup = 0.0;
    for (std::size_t i = 0; i < sol.t.size(); ++i) {
      lowest = std::min({lowest, sol.z1[i], sol.z2[i]});
      sup = std::max({sup, std::abs(sol.z1[i]), std::abs(sol.z2[i])});
    }
    CHECK(lowest >= -1e-12);
    const double Pi = std::max(in.x1.envelope_constant(), in.x2.envelope_constant());
    const auto eb = eta_bound(in.c, Pi);
    CHECK(eb.min_eta > 0.0);
    CHECK(sup <= eb.bound + 1e-6);
  }
}

TEST_CASE("linearity of the delay march") {
  std::mt19937_64 rng(99);
  const auto in = random_delay_instance(rng);
  const auto g1 = Forcing::gaussian(1.0, 0.8, 1.0), g2 = Forcing::gaussian(3.0, 1.2, 0.5);
  const auto h1 = Forcing::gaussian(0.0, 1.0, 2.0), h2 = Forcing::gaussian(2.0, 0.6, 1.0);
  const double al = 0.7, be = 1.9;
  const auto o = march_options();
  const auto a = solve_nonarithmetic(in.c, g1, g2, o);
  const auto b = solve_nonarithmetic(in.c, h1, h2, o);
  const auto ab = solve_nonarithmetic(in.c, al * g1 + be * h1, al * g2 + be * h2, o);
  double err = 0.0;
  for (std::size_t i = 0; i < ab.t.size(); ++i)
    err = std::max({err, std::abs(ab.z1[i] - (al * a.z1[i] + be * b.z1[i])),
                    std::abs(ab.z2[i] - (al * a.z2[i] + be * b.z2[i]))});
  CHECK(err < 1e-10);
}

TEST_CASE("generating identity and factorisation for random parity systems") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 30; ++trial) {
    const auto c = oracle::random_parity_system(rng, 6);
    REQUIRE(has_degenerate_parity(c));
    const auto q = unit_root_quotient(c);
    CHECK(std::abs(q.remainder) < 1e-12);
    for (int i = 0; i < 64; ++i) {
      const auto w = std::polar(1.0, 2.0 * std::numbers::pi * (i + 0.5) / 64.0);
      CHECK(std::abs(generating_identity_residual(c, w)) < 1e-12);
      CHECK(std::abs((1.0 - w) * eval_polynomial(q.q, w) - characteristic(c, w, 1.0)) < 1e-12);
    }
  }
}

TEST_CASE("discrete limits and lattice fibers on random parity systems") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = oracle::random_parity_system(rng, 6);
    std::vector<double> x1(30), x2(30);
    const double r1 = 0.3 + 0.5 * u01(rng), r2 = 0.3 + 0.5 * u01(rng);
    for (std::size_t n = 0; n < 30; ++n) {
      x1[n] = u01(rng) * std::pow(r1, n);
      x2[n] = u01(rng) * std::pow(r2, n);
    }
    const auto z = solve_discrete(c, x1, x2, 2000);
    const auto L = discrete_limits(c, x1, x2);
    CHECK(std::abs(z.z1[2000] - L.limit(1, 2000)) < 1e-8);
    CHECK(std::abs(z.z2[1999] - L.limit(2, 1999)) < 1e-8);

    const auto bump = Forcing::triangle(0.0, 0.9 + u01(rng), 1.0);
    const double theta = u01(rng) * 0.999;
    const double phases[] = {theta};
    const auto sol = solve_lattice(c, bump, Forcing{}, phases, 30.0);
    const auto f = lattice_fiber(bump, theta, sol.t.size() - 1);
    const auto zf = solve_discrete(c, f, std::vector<double>{}, sol.t.size() - 1);
    for (std::size_t n = 0; n < sol.t.size(); ++n) {
      CHECK(sol.z1[n] == zf.z1[n]);
      CHECK(sol.z2[n] == zf.z2[n]);
    }
  }
}

TEST_CASE("inertia is monotone along every sampled ray") {
  const std::vector<oracle::Ifs> cases{
      oracle::table1(),
      oracle::lebesgue(),
      {{0.4, 0.6}, {0.6, -0.5}, {0.0, 0.5}},
      {{0.2, 0.3, 0.5}, {0.9, -0.3, 0.4}, {0.0, 0.1, 0.2}},
      {{0.3, 0.7}, {0.5, 0.5}, {0.0, 0.5}},
  };
  for (const auto& f : cases) {
    const auto p = validate_params(oracle::raw(f));
    const auto m = compute_meta(p);
    int depth = 1;
    while (cell_count(p.size(), depth + 1, std::size_t{1} << 12)) ++depth;
    const auto pencil = assemble_pencil(p, m, depth);
    const auto grid = log_grid(1e-2, 1e7, 400);
    for (Side side : {Side::Positive, Side::Negative}) {
      const auto s = counting_series(pencil, side, grid);
      CHECK(s.monotone);
      for (std::size_t i = 1; i < s.samples.size(); ++i) CHECK(s.samples[i].ind >= s.samples[i - 1].ind);
      CHECK(s.samples.front().ind == 0);
    }
  }
}

TEST_CASE("uniform weight: second-order convergence to (pi n)^2") {
  const auto p = validate_params(oracle::raw(oracle::lebesgue()));
  const auto m = compute_meta(p);
  std::vector<std::vector<double>> err;
  for (int depth = 5; depth <= 8; ++depth) {
    const auto ev = eigenvalues(assemble_pencil(p, m, depth), Side::Positive, 3, 1e-13);
    std::vector<double> e;
    for (std::size_t n = 0; n < 3; ++n) {
      const double exact = std::pow(std::numbers::pi * static_cast<double>(n + 1), 2);
      e.push_back(ev[n] - exact);
    }
    err.push_back(e);
  }
  for (std::size_t k = 0; k + 1 < err.size(); ++k)
    for (std::size_t n = 0; n < 3; ++n) {
      const double ratio = err[k][n] / err[k + 1][n];
      CAPTURE(k);
      CAPTURE(n);
      CHECK(std::abs(ratio - 4.0) < 0.5);
    }
}

TEST_CASE("sign symmetry of the pencil") {
  for (const auto& f : {oracle::table1(), oracle::Ifs{{0.4, 0.6}, {0.6, -0.5}, {0.0, 0.5}}}) {
    const auto p = validate_params(oracle::raw(f));
    const auto n = p.negated();
    const auto a = assemble_pencil(p, compute_meta(p), 6);
    const auto b = assemble_pencil(n, compute_meta(n), 6);
    for (double lambda : {3.0, 40.0, 900.0, 2e4}) {
      CHECK(inertia(a, lambda).count == inertia(b, -lambda).count);
      CHECK(inertia(a, -lambda).count == inertia(b, lambda).count);
    }
  }
}

TEST_CASE("refinement invariants on random parameters") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t N = 2 + trial % 3;
    RawParams raw;
    double total = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
      raw.a.push_back(0.2 + u01(rng));
      total += raw.a.back();
      raw.d.push_back(1.6 * u01(rng) - 0.8);
      raw.beta.push_back(u01(rng) - 0.5);
    }
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < N; ++k) s += (raw.a[k] /= total);
    raw.a[N - 1] = 1.0 - s;
    const auto p = validate_params(raw);
    const auto m = compute_meta(p);

    double res = -1.0;
    for (std::size_t k = 0; k < N; ++k)
      if (raw.d[k] != 0.0) res += std::pow(raw.a[k] * std::abs(raw.d[k]), 0.5 * m.D);
    CHECK(std::abs(res) < 1e-12);

    for (int depth = 0; depth <= 5; ++depth) {
      const auto r = refine(p, m, depth);
      const auto q = refine(p, m, depth + 1);
      for (std::size_t i = 0; i < r.nodes.size(); ++i)
        CHECK(std::abs(r.values[i] - q.values[N * i]) < 1e-13);
      double mass = 0.0;
      for (const auto& c : r.cells) mass += cell_moments(c, m).mass;
      CHECK(std::abs(mass - m.M0) < 1e-13);
    }
  }
}
