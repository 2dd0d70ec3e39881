#pragma once

// Two-component renewal systems
//   Z_j(t) = X_j(t) + sum_k ( u_k Z_j(t - l_k) + v_k Z_{3-j}(t - l_k) ),  j = 1, 2,
// in three flavours: the discrete recursion (integer lags, sequences), the
// lattice problem (integer lags, functions vanishing on the negative axis)
// and the non-arithmetic problem (real delays, Z -> 0 at -infinity).

#include <complex>
#include <span>
#include <vector>

#include "fspec/forcing.hpp"

namespace fspec {

/// u, v indexed by lag; lags are 1..N unless `delays` is non-empty.
struct RenewalCoefficients {
  std::vector<double> u;
  std::vector<double> v;
  std::vector<double> delays;

  std::size_t size() const noexcept { return u.size(); }
  bool has_real_delays() const noexcept { return !delays.empty(); }
  double total_v() const noexcept;
  /// Mean lag J = sum_k lag_k (u_k + v_k).
  double mean_lag() const noexcept;
  double lag(std::size_t k) const noexcept {
    return delays.empty() ? static_cast<double>(k + 1) : delays[k];
  }
};

inline constexpr double kWeightSumTolerance = 1e-12;

/// Lengths, non-negativity and sum(u + v) = 1.
void check_weights(const RenewalCoefficients& c);
/// Weights plus sum(v) > 0 and gcd of supported lags equal to 1.
void check_integer_system(const RenewalCoefficients& c);
/// u vanishes at odd lags, v at even lags.
bool has_degenerate_parity(const RenewalCoefficients& c) noexcept;

struct DiscreteSolution {
  std::vector<double> z1;
  std::vector<double> z2;
};

/// Exact forward recursion for 0 <= n <= n_max; x_j are zero past their end.
DiscreteSolution solve_discrete(const RenewalCoefficients& c, std::span<const double> x1,
                                std::span<const double> x2, std::size_t n_max);

struct DiscreteLimits {
  double omega = 0.0;
  double chi = 0.0;
  double J = 0.0;
  double z1_even = 0.0;
  double z1_odd = 0.0;
  double z2_even = 0.0;
  double z2_odd = 0.0;

  /// (omega - (-1)^{n+j} chi) / J, j in {1, 2}.
  double limit(int j, std::size_t n) const noexcept;
};

DiscreteLimits discrete_limits(const RenewalCoefficients& c, std::span<const double> x1,
                               std::span<const double> x2);

/// (1 - U + V)(w) - (1 - U - V)(-w), zero for degenerate-parity coefficients.
std::complex<double> generating_identity_residual(const RenewalCoefficients& c,
                                                  std::complex<double> w);
/// Coefficients q_0..q_{N-1} of Q with (1 - U - V)(w) = (1 - w) Q(w), and the
/// division remainder.
struct UnitRootQuotient {
  std::vector<double> q;
  double remainder = 0.0;
};
UnitRootQuotient unit_root_quotient(const RenewalCoefficients& c);
std::complex<double> eval_polynomial(std::span<const double> coeffs, std::complex<double> w);
/// 1 - U(w) - sign * V(w) with U(w) = sum u_k w^k.
std::complex<double> characteristic(const RenewalCoefficients& c, std::complex<double> w,
                                    double sign);

struct RenewalSolution {
  std::vector<double> t;
  std::vector<double> z1;
  std::vector<double> z2;
  std::vector<double> predicted1;
  std::vector<double> predicted2;
  /// max |Z_j - predicted_j| over the last stretch of the grid.
  double tail_discrepancy = 0.0;
};

/// Limit profile s(t) = (1/J) sum_k (X1(t - 2k) + X2(t - 2k - 1)).
double periodic_limit_s(const RenewalCoefficients& c, const Forcing& x1, const Forcing& x2,
                        double t);

/// Samples of X on the fiber {theta + n : 0 <= n <= n_max}.
std::vector<double> lattice_fiber(const Forcing& x, double theta, std::size_t n_max);

/// Solves each phase fiber with solve_discrete and merges them by time up to
/// `horizon`. Z1 is compared with s(t), Z2 with s(t - 1) over [horizon - 2, horizon].
RenewalSolution solve_lattice(const RenewalCoefficients& c, const Forcing& x1, const Forcing& x2,
                              std::span<const double> phases, double horizon);

struct NonArithmeticOptions {
  double step = 0.0;  // 0 selects min(delay) / 64
  double t_min = -10.0;
  double t_max = 100.0;
  /// Relative forcing mass allowed left of t_min.
  double envelope_tolerance = 1e-9;
};

struct NonArithmeticLimit {
  double J = 0.0;
  double z1 = 0.0;
  double z2 = 0.0;
};

/// (1/2J) int (X1 + X2), or (1/J) int X_j per component when v vanishes.
NonArithmeticLimit nonarithmetic_limit(const RenewalCoefficients& c, const Forcing& x1,
                                       const Forcing& x2);

/// Causal time march on a uniform grid with cubic interpolation of delayed values.
RenewalSolution solve_nonarithmetic(const RenewalCoefficients& c, const Forcing& x1,
                                    const Forcing& x2, const NonArithmeticOptions& options);

/// Same problem marched through S = Z1 + Z2 and Delta = Z1 - Z2 separately.
RenewalSolution solve_nonarithmetic_split(const RenewalCoefficients& c, const Forcing& x1,
                                          const Forcing& x2, const NonArithmeticOptions& options);

/// eta(t) = sum_k (u_k + v_k) (atan t - atan(t - l_k)).
double eta(const RenewalCoefficients& c, double t);

struct EtaBound {
  double C = 0.0;      // sup_t pi / (eta(t) (t^2 + 1))
  double Pi = 0.0;     // envelope constant of the forcing
  double bound = 0.0;  // C * Pi
  double min_eta = 0.0;
  /// eta(t) t^2 / J at t = +-1e6; both tend to 1.
  double tail_ratio_plus = 0.0;
  double tail_ratio_minus = 0.0;
};

EtaBound eta_bound(const RenewalCoefficients& c, double envelope);

}  // namespace fspec
