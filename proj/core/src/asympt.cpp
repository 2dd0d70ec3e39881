#include "fspec/asympt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fspec/error.hpp"

namespace fspec {

namespace {

constexpr double kMatchTol = 1e-5;

Window series_window(const CountingSeries& s) {
  if (s.samples.empty()) throw Error(ErrorCode::WindowTooNarrow, "empty counting series");
  double lo = std::abs(s.samples.front().lambda), hi = lo;
  for (const auto& x : s.samples) {
    lo = std::min(lo, std::abs(x.lambda));
    hi = std::max(hi, std::abs(x.lambda));
  }
  return {lo, hi};
}

void summarise(PhaseBin& bin) {
  bin.count = bin.samples.size();
  if (bin.samples.empty()) return;
  // Tail: the upper half of the samples by |lambda|, at least two.
  const std::size_t tail =
      std::min(bin.count, std::max<std::size_t>(2, (bin.count + 1) / 2));
  bin.tail_count = tail;
  bin.all_min = bin.all_max = bin.samples.front().ratio;
  for (const auto& s : bin.samples) {
    bin.all_min = std::min(bin.all_min, s.ratio);
    bin.all_max = std::max(bin.all_max, s.ratio);
  }
  const auto first = bin.samples.end() - static_cast<std::ptrdiff_t>(tail);
  bin.min = bin.max = first->ratio;
  double sum = 0.0;
  for (auto it = first; it != bin.samples.end(); ++it) {
    sum += it->ratio;
    bin.min = std::min(bin.min, it->ratio);
    bin.max = std::max(bin.max, it->ratio);
  }
  bin.mean = sum / static_cast<double>(tail);
}

}  // namespace

std::pair<std::size_t, bool> lookup_ind(const CountingSeries& series, double magnitude) {
  const CountingSample* below = nullptr;
  for (const auto& s : series.samples) {
    const double m = std::abs(s.lambda);
    if (std::abs(m / magnitude - 1.0) <= kMatchTol) return {s.ind, true};
    if (m <= magnitude && (!below || m > std::abs(below->lambda))) below = &s;
  }
  return {below ? below->ind : 0, false};
}

std::vector<double> phase_aligned_magnitudes(Window window, double nu,
                                             std::span<const double> phases, Side side) {
  const double shift = side == Side::Negative ? 1.0 : 0.0;
  std::vector<double> out;
  for (double phi : phases) {
    const double k_lo = std::ceil((std::log(window.lo) / nu - phi - shift) / 2.0 - 1e-9);
    const double k_hi = std::floor((std::log(window.hi) / nu - phi - shift) / 2.0 + 1e-9);
    for (double k = k_lo; k <= k_hi; k += 1.0)
      out.push_back(std::exp(nu * (2.0 * k + phi + shift)));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

AmplitudeEstimate estimate_periodic_s(const CountingSeries& series, std::span<const double> phases,
                                      std::optional<Window> window) {
  if (series.classification != Classification::DegenerateArithmetic || !series.nu)
    throw Error(ErrorCode::InvalidArgument, "periodic amplitude needs a degenerate arithmetic series");
  const double nu = *series.nu;
  const Window w = window.value_or(series_window(series));
  if (w.hi / w.lo < std::exp(6.0 * nu) * (1.0 - 1e-12))
    throw Error(ErrorCode::WindowTooNarrow, "window must span three periods (ratio >= e^{6 nu})");

  AmplitudeEstimate est;
  est.mode = AmplitudeEstimate::Mode::Periodic;
  est.side = series.side;
  est.lambda_lo = w.lo;
  est.lambda_hi = w.hi;
  const double sign = sign_of(series.side);
  const double half_order = 0.5 * series.D;
  for (double phi : phases) {
    PhaseBin bin;
    bin.phi = phi;
    const double single[] = {phi};
    for (double mag : phase_aligned_magnitudes(w, nu, single, series.side)) {
      const auto [ind, matched] = lookup_ind(series, mag);
      bin.samples.push_back(
          {sign * mag, ind, static_cast<double>(ind) / std::pow(mag, half_order), matched});
    }
    summarise(bin);
    est.bins.push_back(std::move(bin));
  }
  return est;
}

AmplitudeEstimate estimate_constant_s(const CountingSeries& series, std::optional<Window> window) {
  const Window w = window.value_or(series_window(series));
  if (w.hi / w.lo < 10.0 * (1.0 - 1e-12))
    throw Error(ErrorCode::WindowTooNarrow, "window must span at least one decade");
  AmplitudeEstimate est;
  est.mode = AmplitudeEstimate::Mode::Constant;
  est.side = series.side;
  est.lambda_lo = w.lo;
  est.lambda_hi = w.hi;
  const double half_order = 0.5 * series.D;
  std::vector<double> ratios;
  for (const auto& s : series.samples) {
    const double m = std::abs(s.lambda);
    if (m < w.hi / 10.0 * (1.0 - 1e-12) || m > w.hi * (1.0 + 1e-12)) continue;
    ratios.push_back(static_cast<double>(s.ind) / std::pow(m, half_order));
  }
  if (ratios.size() < 3)
    throw Error(ErrorCode::WindowTooNarrow, "fewer than three samples in the top decade");
  const double mean = std::accumulate(ratios.begin(), ratios.end(), 0.0) /
                      static_cast<double>(ratios.size());
  est.spread_min = *std::min_element(ratios.begin(), ratios.end());
  est.spread_max = *std::max_element(ratios.begin(), ratios.end());
  (series.side == Side::Positive ? est.s_plus : est.s_minus) = mean;
  return est;
}

DoublingReport period_doubling_check(const CountingSeries& pos, const CountingSeries& neg,
                                     std::span<const double> phases, std::optional<Window> window) {
  DoublingReport r;
  const auto ep = estimate_periodic_s(pos, phases, window);
  const auto en = estimate_periodic_s(neg, phases, window);
  for (std::size_t i = 0; i < ep.bins.size(); ++i) {
    const auto& p = ep.bins[i];
    const auto& n = en.bins[i];
    const double rel = p.mean != 0.0 ? std::abs(p.mean - n.mean) / std::abs(p.mean)
                                     : std::abs(p.mean - n.mean);
    r.rows.push_back({p.phi, p.mean, p.min, p.max, n.mean, n.min, n.max, rel});
    r.max_rel_discrepancy = std::max(r.max_rel_discrepancy, rel);
  }
  const double ends[] = {0.0, 1.0};
  const auto p01 = estimate_periodic_s(pos, ends, window);
  const auto n01 = estimate_periodic_s(neg, ends, window);
  auto disjoint = [](const PhaseBin& a, const PhaseBin& b) { return a.max < b.min || b.max < a.min; };
  r.disjoint_pos = disjoint(p01.bins[0], p01.bins[1]);
  r.disjoint_neg = disjoint(n01.bins[0], n01.bins[1]);
  r.pos_s0 = p01.bins[0];
  r.pos_s1 = p01.bins[1];
  return r;
}

}  // namespace fspec
