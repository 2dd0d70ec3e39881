#include "fspec/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "fspec/error.hpp"

namespace fspec {

double RenewalCoefficients::total_v() const noexcept {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

double RenewalCoefficients::mean_lag() const noexcept {
  double J = 0.0;
  for (std::size_t k = 0; k < size(); ++k) J += lag(k) * (u[k] + v[k]);
  return J;
}

void check_weights(const RenewalCoefficients& c) {
  if (c.u.empty() || c.v.size() != c.u.size())
    throw Error(ErrorCode::CoefficientInvariantViolation, "u and v must be non-empty and equal length");
  if (c.has_real_delays() && c.delays.size() != c.u.size())
    throw Error(ErrorCode::CoefficientInvariantViolation, "delays must match u and v in length");
  double sum = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (!(c.u[k] >= 0.0) || !(c.v[k] >= 0.0))
      throw Error(ErrorCode::CoefficientInvariantViolation, "u and v must be non-negative");
    sum += c.u[k] + c.v[k];
  }
  if (std::abs(sum - 1.0) > kWeightSumTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "sum(u + v) = " << sum;
    throw Error(ErrorCode::CoefficientInvariantViolation, msg.str());
  }
  for (double l : c.delays)
    if (!(l > 0.0)) throw Error(ErrorCode::CoefficientInvariantViolation, "delays must be positive");
}

void check_integer_system(const RenewalCoefficients& c) {
  check_weights(c);
  if (c.has_real_delays())
    throw Error(ErrorCode::CoefficientInvariantViolation, "integer-lag system expected");
  if (!(c.total_v() > 0.0))
    throw Error(ErrorCode::CoefficientInvariantViolation, "two-component system needs sum(v) > 0");
  std::size_t g = 0;
  for (std::size_t k = 0; k < c.size(); ++k)
    if (c.u[k] + c.v[k] > 0.0) g = std::gcd(g, k + 1);
  if (g != 1) {
    std::ostringstream msg;
    msg << "gcd of supported lags is " << g;
    throw Error(ErrorCode::CoefficientInvariantViolation, msg.str());
  }
}

bool has_degenerate_parity(const RenewalCoefficients& c) noexcept {
  for (std::size_t k = 0; k < c.size(); ++k) {
    const bool odd_lag = (k + 1) % 2 == 1;
    if (odd_lag && c.u[k] != 0.0) return false;
    if (!odd_lag && c.v[k] != 0.0) return false;
  }
  return true;
}

DiscreteSolution solve_discrete(const RenewalCoefficients& c, std::span<const double> x1,
                                std::span<const double> x2, std::size_t n_max) {
  check_integer_system(c);
  const std::size_t N = c.size();
  DiscreteSolution s;
  s.z1.assign(n_max + 1, 0.0);
  s.z2.assign(n_max + 1, 0.0);
  for (std::size_t n = 0; n <= n_max; ++n) {
    double a1 = n < x1.size() ? x1[n] : 0.0;
    double a2 = n < x2.size() ? x2[n] : 0.0;
    const std::size_t top = std::min(N, n);
    for (std::size_t k = 1; k <= top; ++k) {
      const double u = c.u[k - 1], v = c.v[k - 1];
      a1 += u * s.z1[n - k] + v * s.z2[n - k];
      a2 += u * s.z2[n - k] + v * s.z1[n - k];
    }
    s.z1[n] = a1;
    s.z2[n] = a2;
  }
  return s;
}

double DiscreteLimits::limit(int j, std::size_t n) const noexcept {
  const bool even = (n + static_cast<std::size_t>(j)) % 2 == 0;
  return (omega - (even ? chi : -chi)) / J;
}

DiscreteLimits discrete_limits(const RenewalCoefficients& c, std::span<const double> x1,
                               std::span<const double> x2) {
  check_integer_system(c);
  if (!has_degenerate_parity(c))
    throw Error(ErrorCode::NonDegenerateParity, "u must vanish at odd lags and v at even lags");
  DiscreteLimits L;
  const std::size_t len = std::max(x1.size(), x2.size());
  for (std::size_t k = 0; k < len; ++k) {
    const double a = k < x1.size() ? x1[k] : 0.0;
    const double b = k < x2.size() ? x2[k] : 0.0;
    L.omega += a + b;
    L.chi += (k % 2 == 0 ? 1.0 : -1.0) * (a - b);
  }
  L.omega *= 0.5;
  L.chi *= 0.5;
  L.J = c.mean_lag();
  L.z1_even = L.limit(1, 0);
  L.z1_odd = L.limit(1, 1);
  L.z2_even = L.limit(2, 0);
  L.z2_odd = L.limit(2, 1);
  return L;
}

std::complex<double> eval_polynomial(std::span<const double> coeffs, std::complex<double> w) {
  std::complex<double> acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * w + *it;
  return acc;
}

std::complex<double> characteristic(const RenewalCoefficients& c, std::complex<double> w,
                                    double sign) {
  std::complex<double> acc = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) acc = (acc + (c.u[k] + sign * c.v[k])) * w;
  return 1.0 - acc;
}

std::complex<double> generating_identity_residual(const RenewalCoefficients& c,
                                                  std::complex<double> w) {
  return characteristic(c, w, -1.0) - characteristic(c, -w, 1.0);
}

UnitRootQuotient unit_root_quotient(const RenewalCoefficients& c) {
  // p(w) = 1 - sum (u_k + v_k) w^k = (1 - w) q(w): q_k = p_k + q_{k-1}.
  const std::size_t N = c.size();
  UnitRootQuotient out;
  out.q.resize(N);
  double prev = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    const double p = k == 0 ? 1.0 : -(c.u[k - 1] + c.v[k - 1]);
    prev = p + prev;
    out.q[k] = prev;
  }
  // Coefficient of w^N must then vanish: p_N + q_{N-1} = 0.
  out.remainder = -(c.u[N - 1] + c.v[N - 1]) + out.q[N - 1];
  return out;
}

double periodic_limit_s(const RenewalCoefficients& c, const Forcing& x1, const Forcing& x2,
                        double t) {
  for (const Forcing* f : {&x1, &x2}) {
    const auto kind = f->certificate().kind;
    if (!f->is_zero() && kind != DecayKind::Compact && kind != DecayKind::Exponential)
      throw Error(ErrorCode::SeriesDivergence, "forcing lacks an exponential decay certificate");
  }
  const double J = c.mean_lag();
  auto support = [](const Forcing& f) {
    return f.is_zero() ? std::pair{0.0, 0.0} : f.effective_support();
  };
  const auto [lo1, hi1] = support(x1);
  const auto [lo2, hi2] = support(x2);
  const double lo = std::min(lo1, lo2 + 1.0);
  const double hi = std::max(hi1, hi2 + 1.0);
  // Nonzero terms need lo <= t - 2k <= hi.
  const double k_lo = std::floor((t - hi) / 2.0) - 1.0;
  const double k_hi = std::ceil((t - lo) / 2.0) + 1.0;
  if (k_hi - k_lo > 1e8) throw Error(ErrorCode::SeriesDivergence, "series support is too wide");
  double s = 0.0;
  for (double k = k_lo; k <= k_hi; k += 1.0) s += x1(t - 2.0 * k) + x2(t - 2.0 * k - 1.0);
  return s / J;
}

std::vector<double> lattice_fiber(const Forcing& x, double theta, std::size_t n_max) {
  std::vector<double> out(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) out[n] = x(theta + static_cast<double>(n));
  return out;
}

RenewalSolution solve_lattice(const RenewalCoefficients& c, const Forcing& x1, const Forcing& x2,
                              std::span<const double> phases, double horizon) {
  check_integer_system(c);
  if (!has_degenerate_parity(c))
    throw Error(ErrorCode::NonDegenerateParity, "u must vanish at odd lags and v at even lags");
  if (!x1.vanishes_on_negative_axis() || !x2.vanishes_on_negative_axis())
    throw Error(ErrorCode::ForcingOnNegativeAxis, "lattice forcing must vanish for t < 0");
  if (!(horizon >= 0.0)) throw Error(ErrorCode::InvalidArgument, "horizon must be non-negative");

  struct Point {
    double t, z1, z2;
  };
  std::vector<Point> points;
  for (double theta : phases) {
    if (!(theta >= 0.0 && theta < 1.0))
      throw Error(ErrorCode::InvalidArgument, "phases must lie in [0, 1)");
    if (theta > horizon) continue;
    const auto n_max = static_cast<std::size_t>(std::floor(horizon - theta));
    const auto f1 = lattice_fiber(x1, theta, n_max);
    const auto f2 = lattice_fiber(x2, theta, n_max);
    const auto z = solve_discrete(c, f1, f2, n_max);
    for (std::size_t n = 0; n <= n_max; ++n)
      points.push_back({theta + static_cast<double>(n), z.z1[n], z.z2[n]});
  }
  std::stable_sort(points.begin(), points.end(),
                   [](const Point& a, const Point& b) { return a.t < b.t; });

  RenewalSolution sol;
  for (const auto& p : points) {
    sol.t.push_back(p.t);
    sol.z1.push_back(p.z1);
    sol.z2.push_back(p.z2);
    const double s1 = periodic_limit_s(c, x1, x2, p.t);
    const double s2 = periodic_limit_s(c, x1, x2, p.t - 1.0);
    sol.predicted1.push_back(s1);
    sol.predicted2.push_back(s2);
    if (p.t >= horizon - 2.0)
      sol.tail_discrepancy =
          std::max({sol.tail_discrepancy, std::abs(p.z1 - s1), std::abs(p.z2 - s2)});
  }
  return sol;
}

NonArithmeticLimit nonarithmetic_limit(const RenewalCoefficients& c, const Forcing& x1,
                                       const Forcing& x2) {
  check_weights(c);
  if (!c.has_real_delays())
    throw Error(ErrorCode::CoefficientInvariantViolation, "real delays expected");
  NonArithmeticLimit L;
  L.J = c.mean_lag();
  const double m1 = x1.integral(), m2 = x2.integral();
  if (c.total_v() > 0.0) {
    L.z1 = L.z2 = (m1 + m2) / (2.0 * L.J);
  } else {
    L.z1 = m1 / L.J;
    L.z2 = m2 / L.J;
  }
  return L;
}

namespace {

double resolve_step(const RenewalCoefficients& c, const NonArithmeticOptions& o) {
  check_weights(c);
  if (!c.has_real_delays())
    throw Error(ErrorCode::CoefficientInvariantViolation, "real delays expected");
  const double min_delay = *std::min_element(c.delays.begin(), c.delays.end());
  const double h = o.step > 0.0 ? o.step : min_delay / 64.0;
  if (h > min_delay / 4.0) {
    std::ostringstream msg;
    msg << "step " << h << " exceeds min delay / 4 = " << min_delay / 4.0;
    throw Error(ErrorCode::UnstableStep, msg.str());
  }
  if (!(o.t_max > o.t_min)) throw Error(ErrorCode::InvalidArgument, "t_max must exceed t_min");
  return h;
}

void check_envelope(const Forcing& x1, const Forcing& x2, const NonArithmeticOptions& o) {
  const double inf = std::numeric_limits<double>::max();
  const double total = x1.abs_mass_left_of(inf) + x2.abs_mass_left_of(inf);
  const double left = x1.abs_mass_left_of(o.t_min) + x2.abs_mass_left_of(o.t_min);
  if (left > o.envelope_tolerance * std::max(1.0, total)) {
    std::ostringstream msg;
    msg << "forcing mass " << left << " lies left of t_min = " << o.t_min;
    throw Error(ErrorCode::EnvelopeTooWide, msg.str());
  }
}

// Cubic Lagrange value at fractional grid position `pos` (values before the
// grid are zero). Falls back to linear when the cubic would leave the sign of
// a single-signed stencil.
double delayed_value(const std::vector<double>& z, double pos) {
  if (pos < -2.0) return 0.0;
  const double fl = std::floor(pos);
  const double fr = pos - fl;
  const auto f = static_cast<std::ptrdiff_t>(fl);
  auto at = [&](std::ptrdiff_t i) { return i < 0 ? 0.0 : z[static_cast<std::size_t>(i)]; };
  const double ym = at(f - 1), y0 = at(f), y1 = at(f + 1), y2 = at(f + 2);
  const double wm = -fr * (fr - 1.0) * (fr - 2.0) / 6.0;
  const double w0 = (fr + 1.0) * (fr - 1.0) * (fr - 2.0) / 2.0;
  const double w1 = -(fr + 1.0) * fr * (fr - 2.0) / 2.0;
  const double w2 = (fr + 1.0) * fr * (fr - 1.0) / 6.0;
  const double cubic = wm * ym + w0 * y0 + w1 * y1 + w2 * y2;
  const double lo = std::min({ym, y0, y1, y2});
  const double hi = std::max({ym, y0, y1, y2});
  if ((lo >= 0.0 && cubic < 0.0) || (hi <= 0.0 && cubic > 0.0))
    return (1.0 - fr) * y0 + fr * y1;
  return cubic;
}

RenewalSolution make_grid(const NonArithmeticOptions& o, double h) {
  RenewalSolution sol;
  const auto steps = static_cast<std::size_t>(std::ceil((o.t_max - o.t_min) / h - 1e-9));
  sol.t.resize(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) sol.t[i] = o.t_min + static_cast<double>(i) * h;
  sol.z1.assign(steps + 1, 0.0);
  sol.z2.assign(steps + 1, 0.0);
  return sol;
}

// Scalar march Y(t) = F(t) + sum_k w_k Y(t - l_k).
void march_scalar(std::vector<double>& y, const std::vector<double>& forcing,
                  const std::vector<double>& weights, const std::vector<double>& delays, double h) {
  for (std::size_t i = 0; i < y.size(); ++i) {
    double acc = forcing[i];
    for (std::size_t k = 0; k < weights.size(); ++k) {
      if (weights[k] == 0.0) continue;
      acc += weights[k] * delayed_value(y, static_cast<double>(i) - delays[k] / h);
    }
    y[i] = acc;
  }
}

void finish(RenewalSolution& sol, const NonArithmeticLimit& L) {
  sol.predicted1.assign(sol.t.size(), L.z1);
  sol.predicted2.assign(sol.t.size(), L.z2);
  const double t_end = sol.t.back();
  sol.tail_discrepancy = 0.0;
  for (std::size_t i = 0; i < sol.t.size(); ++i) {
    if (sol.t[i] < t_end - 2.0) continue;
    sol.tail_discrepancy = std::max(
        {sol.tail_discrepancy, std::abs(sol.z1[i] - L.z1), std::abs(sol.z2[i] - L.z2)});
  }
}

}  // namespace

RenewalSolution solve_nonarithmetic(const RenewalCoefficients& c, const Forcing& x1,
                                    const Forcing& x2, const NonArithmeticOptions& options) {
  const double h = resolve_step(c, options);
  check_envelope(x1, x2, options);
  RenewalSolution sol = make_grid(options, h);
  const std::size_t N = c.size();
  std::vector<double> shift(N);
  for (std::size_t k = 0; k < N; ++k) shift[k] = c.delays[k] / h;

  for (std::size_t i = 0; i < sol.t.size(); ++i) {
    const double t = sol.t[i];
    double a1 = x1(t), a2 = x2(t);
    for (std::size_t k = 0; k < N; ++k) {
      const double pos = static_cast<double>(i) - shift[k];
      const double d1 = delayed_value(sol.z1, pos);
      const double d2 = delayed_value(sol.z2, pos);
      a1 += c.u[k] * d1 + c.v[k] * d2;
      a2 += c.u[k] * d2 + c.v[k] * d1;
    }
    sol.z1[i] = a1;
    sol.z2[i] = a2;
  }
  finish(sol, nonarithmetic_limit(c, x1, x2));
  return sol;
}

RenewalSolution solve_nonarithmetic_split(const RenewalCoefficients& c, const Forcing& x1,
                                          const Forcing& x2, const NonArithmeticOptions& options) {
  const double h = resolve_step(c, options);
  check_envelope(x1, x2, options);
  RenewalSolution sol = make_grid(options, h);
  const std::size_t M = sol.t.size(), N = c.size();
  std::vector<double> fs(M), fd(M), ws(N), wd(N);
  for (std::size_t i = 0; i < M; ++i) {
    const double a = x1(sol.t[i]), b = x2(sol.t[i]);
    fs[i] = a + b;
    fd[i] = a - b;
  }
  for (std::size_t k = 0; k < N; ++k) {
    ws[k] = c.u[k] + c.v[k];
    wd[k] = c.u[k] - c.v[k];
  }
  std::vector<double> S(M, 0.0), Dl(M, 0.0);
  march_scalar(S, fs, ws, c.delays, h);
  march_scalar(Dl, fd, wd, c.delays, h);
  for (std::size_t i = 0; i < M; ++i) {
    sol.z1[i] = 0.5 * (S[i] + Dl[i]);
    sol.z2[i] = 0.5 * (S[i] - Dl[i]);
  }
  finish(sol, nonarithmetic_limit(c, x1, x2));
  return sol;
}

double eta(const RenewalCoefficients& c, double t) {
  double s = 0.0;
  // atan(t) - atan(t - l) = atan2(l, 1 + t (t - l)) without cancellation.
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double l = c.lag(k);
    s += (c.u[k] + c.v[k]) * std::atan2(l, 1.0 + t * (t - l));
  }
  return s;
}

EtaBound eta_bound(const RenewalCoefficients& c, double envelope) {
  check_weights(c);
  double max_lag = 0.0, min_lag = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c.u[k] + c.v[k] == 0.0) continue;
    max_lag = std::max(max_lag, c.lag(k));
    min_lag = std::min(min_lag, c.lag(k));
  }
  auto ratio = [&](double t) { return std::numbers::pi / (eta(c, t) * (t * t + 1.0)); };

  EtaBound out;
  out.min_eta = std::numeric_limits<double>::infinity();
  double best_t = 0.0;
  auto probe = [&](double t) {
    const double e = eta(c, t);
    out.min_eta = std::min(out.min_eta, e);
    const double r = std::numbers::pi / (e * (t * t + 1.0));
    if (r > out.C) {
      out.C = r;
      best_t = t;
    }
  };
  const double reach = 100.0 * std::max(1.0, max_lag);
  const double step = std::min(1.0, min_lag) / 100.0;
  for (double t = -reach; t <= reach + max_lag; t += step) probe(t);
  for (double mag = reach; mag <= 1e8; mag *= 1.05) {
    probe(mag);
    probe(-mag + max_lag);
  }
  // Local refinement around the sampled maximum.
  double lo = best_t - step, hi = best_t + step;
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    (ratio(m1) < ratio(m2) ? lo : hi) = (ratio(m1) < ratio(m2) ? m1 : m2);
  }
  out.C = std::max(out.C, ratio(0.5 * (lo + hi)));
  // Limit of the ratio at +-infinity is pi / J.
  out.C = std::max(out.C, std::numbers::pi / c.mean_lag());

  const double J = c.mean_lag();
  out.tail_ratio_plus = eta(c, 1e6) * 1e12 / J;
  out.tail_ratio_minus = eta(c, -1e6) * 1e12 / J;
  out.Pi = envelope;
  out.bound = out.C * envelope;
  return out;
}

}  // namespace fspec
