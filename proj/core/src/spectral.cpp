#include "fspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fspec/error.hpp"
#include "fspec/parallel.hpp"

namespace fspec {

const char* to_string(Side side) noexcept { return side == Side::Positive ? "pos" : "neg"; }

Pencil assemble_pencil(const SelfSimilarParams& params, const SimilarityMeta& meta, int depth,
                       std::size_t budget) {
  const auto cells = cell_count(params.size(), depth, budget);
  if (!cells) {
    std::ostringstream msg;
    msg << params.size() << "^" << depth << " cells exceed the budget of " << budget;
    throw Error(ErrorCode::BudgetExceeded, msg.str());
  }
  if (*cells < 2) throw Error(ErrorCode::InvalidArgument, "depth must leave an interior node");

  // Full node arrays (boundary included); boundary rows are dropped below.
  const std::size_t nodes = *cells + 1;
  std::vector<double> x(nodes), ad(nodes, 0.0), ao(nodes - 1, 0.0), bd(nodes, 0.0),
      bo(nodes - 1, 0.0);
  std::size_t i = 0;
  visit_cells(
      params, depth,
      [&](const CellGeometry& c) {
        const double h = c.width;
        const auto m = cell_moments(c, meta);
        // Integrals of P against the local hats N_R = (x - left)/h, N_L = 1 - N_R.
        const double p_right = (m.first - c.left * m.mass) / h;
        const double p_left = m.mass - p_right;
        x[i] = c.left;
        ad[i] += 1.0 / h;
        ad[i + 1] += 1.0 / h;
        ao[i] -= 1.0 / h;
        // (N_L^2)' = -2 N_L / h, (N_R^2)' = 2 N_R / h, (N_L N_R)' = (N_L - N_R) / h.
        bd[i] -= 2.0 * p_left / h;
        bd[i + 1] += 2.0 * p_right / h;
        bo[i] += (p_left - p_right) / h;
        ++i;
      },
      budget);
  x[nodes - 1] = 1.0;

  Pencil p;
  p.depth = depth;
  p.meta = meta;
  p.nodes.assign(x.begin() + 1, x.end() - 1);
  p.a_diag.assign(ad.begin() + 1, ad.end() - 1);
  p.b_diag.assign(bd.begin() + 1, bd.end() - 1);
  p.a_off.assign(ao.begin() + 1, ao.end() - 1);
  p.b_off.assign(bo.begin() + 1, bo.end() - 1);
  return p;
}

InertiaResult inertia(const Pencil& pencil, double lambda) {
  constexpr double kPivotTol = 1e-14;
  constexpr double kTiny = 1e-300;
  InertiaResult r;
  const std::size_t n = pencil.size();
  double q = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double diag = pencil.a_diag[i] + lambda * pencil.b_diag[i];
    const double scale = std::abs(pencil.a_diag[i]) + std::abs(lambda * pencil.b_diag[i]);
    if (i == 0) {
      q = diag;
    } else {
      const double off = pencil.a_off[i - 1] + lambda * pencil.b_off[i - 1];
      q = diag - off * off / q;
    }
    if (std::abs(q) <= kPivotTol * scale) {
      r.near_singular = true;
      // Strict convention: a vanishing pivot is not counted as negative.
      q = std::max(kPivotTol * scale, kTiny);
    }
    if (q < 0.0) ++r.count;
  }
  return r;
}

std::vector<double> eigenvalues(const Pencil& pencil, Side side, std::size_t count,
                                double rel_tol) {
  if (count == 0) throw Error(ErrorCode::InvalidArgument, "eigenvalue count must be positive");
  const double sign = sign_of(side);
  auto ind = [&](double mag) { return inertia(pencil, sign * mag).count; };

  double top = 1.0;
  while (ind(top) < count) {
    top *= 2.0;
    if (top > 1e150) {
      std::ostringstream msg;
      msg << "only " << ind(top) << " eigenvalues on the " << to_string(side) << " ray, "
          << count << " requested";
      throw Error(ErrorCode::RayExhausted, msg.str());
    }
  }

  std::vector<double> out(count);
  parallel_for(count, [&](std::size_t idx) {
    const std::size_t k = idx + 1;
    double lo = 0.0, hi = top;
    while (hi - lo > rel_tol * hi) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (ind(mid) >= k ? hi : lo) = mid;
    }
    out[idx] = sign * hi;
  });
  return out;
}

CountingSeries counting_series(const Pencil& pencil, Side side,
                               std::span<const double> magnitudes) {
  for (std::size_t i = 0; i < magnitudes.size(); ++i) {
    if (!(magnitudes[i] > 0.0))
      throw Error(ErrorCode::InvalidArgument, "counting grid must be positive");
    if (i > 0 && !(magnitudes[i] > magnitudes[i - 1]))
      throw Error(ErrorCode::InvalidArgument, "counting grid must be strictly increasing");
  }
  CountingSeries s;
  s.side = side;
  s.depth = pencil.depth;
  s.D = pencil.meta.D;
  s.nu = pencil.meta.nu;
  s.classification = pencil.meta.classification;
  s.samples.resize(magnitudes.size());
  const double sign = sign_of(side);
  parallel_for(magnitudes.size(), [&](std::size_t i) {
    const double lambda = sign * magnitudes[i];
    const auto r = inertia(pencil, lambda);
    s.samples[i] = {lambda, r.count, r.near_singular};
  });
  for (std::size_t i = 1; i < s.samples.size(); ++i)
    if (s.samples[i].ind < s.samples[i - 1].ind) s.monotone = false;
  return s;
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2)
    throw Error(ErrorCode::InvalidArgument, "log grid needs 0 < lo < hi and >= 2 points");
  std::vector<double> g(points);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < points; ++i)
    g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

ConvergedEigenvalues converged_eigenvalues(const SelfSimilarParams& params,
                                           const SimilarityMeta& meta, Side side,
                                           std::size_t count, const ConvergencePolicy& policy) {
  if (!(policy.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  int depth = policy.depth_min;
  if (depth < 0) {
    depth = 1;
    while (cell_count(params.size(), depth, policy.budget).value_or(0) < 16 * count &&
           cell_count(params.size(), depth + 1, policy.budget))
      ++depth;
  }
  ConvergedEigenvalues out;
  out.side = side;
  std::vector<double> prev;
  for (; depth <= policy.depth_max; ++depth) {
    if (!cell_count(params.size(), depth, policy.budget)) break;
    const Pencil p = assemble_pencil(params, meta, depth, policy.budget);
    auto cur = eigenvalues(p, side, count);
    out.depth = depth;
    if (!prev.empty()) {
      out.previous = prev;
      out.rel_gap.resize(count);
      double worst = 0.0;
      for (std::size_t k = 0; k < count; ++k) {
        out.rel_gap[k] = std::abs(cur[k] - prev[k]) / std::abs(cur[k]);
        worst = std::max(worst, out.rel_gap[k]);
      }
      out.values = cur;
      if (worst < policy.tol) {
        out.converged = true;
        return out;
      }
    }
    out.values = cur;
    prev = std::move(cur);
  }
  return out;
}

}  // namespace fspec
