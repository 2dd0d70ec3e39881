#pragma once

// Amplitude of ind T(lambda) ~ |lambda|^{D/2} s(.) read off counting series:
// a 2-periodic s on the phase ln|lambda| / nu for degenerate arithmetic
// weights, constants s+- otherwise.

#include <optional>
#include <span>
#include <vector>

#include "fspec/spectral.hpp"

namespace fspec {

struct AmplitudeSample {
  double lambda;  // signed, phase aligned
  std::size_t ind;
  double ratio;  // ind / |lambda|^{D/2}
  bool matched;  // false: step value from the nearest sample below
};

struct PhaseBin {
  double phi = 0.0;
  double mean = 0.0;  // over the tail samples
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;       // all samples in the window
  std::size_t tail_count = 0;  // samples entering mean/min/max
  double all_min = 0.0;
  double all_max = 0.0;
  std::vector<AmplitudeSample> samples;
};

struct AmplitudeEstimate {
  enum class Mode { Periodic, Constant } mode = Mode::Periodic;
  Side side = Side::Positive;
  std::vector<PhaseBin> bins;
  std::optional<double> s_plus;
  std::optional<double> s_minus;
  double spread_min = 0.0;  // constant mode
  double spread_max = 0.0;
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
};

struct Window {
  double lo;
  double hi;
};

/// Counting series ind at |lambda| = target: the sample within relative
/// 1e-5 if present, else the value of the nearest sample below.
std::pair<std::size_t, bool> lookup_ind(const CountingSeries& series, double magnitude);

/// |lambda| = exp(nu (2k + phi + shift)) inside the window, shift = 1 on the
/// negative ray.
std::vector<double> phase_aligned_magnitudes(Window window, double nu, std::span<const double> phases,
                                             Side side);

/// Per-phase estimate of s; negative-ray series are shifted by -1 in phase so
/// both rays estimate the same s(phi).
AmplitudeEstimate estimate_periodic_s(const CountingSeries& series, std::span<const double> phases,
                                      std::optional<Window> window = std::nullopt);

/// s+- as the mean of ind / |lambda|^{D/2} over the top decade of the window.
AmplitudeEstimate estimate_constant_s(const CountingSeries& series,
                                      std::optional<Window> window = std::nullopt);

struct DoublingRow {
  double phi;
  double pos_mean, pos_min, pos_max;
  double neg_mean, neg_min, neg_max;
  double rel_discrepancy;  // |pos - neg| / pos
};

struct DoublingReport {
  std::vector<DoublingRow> rows;
  double max_rel_discrepancy = 0.0;
  /// s(0) and s(1) tail spreads are disjoint on the positive / negative ray.
  bool disjoint_pos = false;
  bool disjoint_neg = false;
  PhaseBin pos_s0, pos_s1;
};

DoublingReport period_doubling_check(const CountingSeries& pos, const CountingSeries& neg,
                                     std::span<const double> phases,
                                     std::optional<Window> window = std::nullopt);

}  // namespace fspec
