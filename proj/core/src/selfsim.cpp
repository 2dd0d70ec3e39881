#include "fspec/selfsim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fspec/error.hpp"

namespace fspec {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ScaleSumMismatch: return "ScaleSumMismatch";
    case ErrorCode::NonPositiveScale: return "NonPositiveScale";
    case ErrorCode::ContractionViolation: return "ContractionViolation";
    case ErrorCode::NoSpectralOrder: return "NoSpectralOrder";
    case ErrorCode::FixedPointSingular: return "FixedPointSingular";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::CoefficientInvariantViolation: return "CoefficientInvariantViolation";
    case ErrorCode::NonDegenerateParity: return "NonDegenerateParity";
    case ErrorCode::ForcingOnNegativeAxis: return "ForcingOnNegativeAxis";
    case ErrorCode::UnstableStep: return "UnstableStep";
    case ErrorCode::EnvelopeTooWide: return "EnvelopeTooWide";
    case ErrorCode::WindowTooNarrow: return "WindowTooNarrow";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SeriesDivergence: return "SeriesDivergence";
    case ErrorCode::RayExhausted: return "RayExhausted";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

ErrorKind kind_of(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SeriesDivergence:
    case ErrorCode::RayExhausted:
    case ErrorCode::NotConverged:
      return ErrorKind::Numerical;
    case ErrorCode::Io:
      return ErrorKind::Io;
    default:
      return ErrorKind::Validation;
  }
}

namespace {

constexpr double kScaleSumTolerance = 1e-12;

bool active(double d) noexcept { return d != 0.0; }

}  // namespace

SelfSimilarParams SelfSimilarParams::validate(const RawParams& raw) {
  const std::size_t n = raw.a.size();
  if (raw.d.size() != n || raw.beta.size() != n) {
    std::ostringstream msg;
    msg << "a, d, beta have lengths " << raw.a.size() << ", " << raw.d.size() << ", "
        << raw.beta.size();
    throw Error(ErrorCode::LengthMismatch, msg.str());
  }
  if (n < 2) throw Error(ErrorCode::LengthMismatch, "at least two pieces are required");

  double sum = 0.0;
  double contraction = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::isfinite(raw.a[k]) || !std::isfinite(raw.d[k]) || !std::isfinite(raw.beta[k]))
      throw Error(ErrorCode::InvalidArgument, "non-finite parameter value");
    if (!(raw.a[k] > 0.0)) {
      std::ostringstream msg;
      msg << "a[" << k << "] = " << raw.a[k];
      throw Error(ErrorCode::NonPositiveScale, msg.str());
    }
    sum += raw.a[k];
    contraction += raw.a[k] * raw.d[k] * raw.d[k];
  }
  if (std::abs(sum - 1.0) > kScaleSumTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "sum of scales is " << sum;
    throw Error(ErrorCode::ScaleSumMismatch, msg.str());
  }
  if (contraction >= 1.0) {
    std::ostringstream msg;
    msg << "sum a_k d_k^2 = " << contraction << " >= 1";
    throw Error(ErrorCode::ContractionViolation, msg.str());
  }

  SelfSimilarParams p;
  p.a_ = raw.a;
  p.d_ = raw.d;
  p.beta_ = raw.beta;
  p.alpha_.resize(n + 1);
  p.alpha_[0] = 0.0;
  std::partial_sum(p.a_.begin(), p.a_.end(), p.alpha_.begin() + 1);
  return p;
}

bool SelfSimilarParams::degenerate() const noexcept {
  return std::none_of(d_.begin(), d_.end(), active);
}

SelfSimilarParams SelfSimilarParams::negated() const {
  SelfSimilarParams p = *this;
  for (auto& b : p.beta_) b = -b;
  return p;
}

SelfSimilarParams validate_params(const RawParams& raw) { return SelfSimilarParams::validate(raw); }

const char* to_string(Classification c) noexcept {
  switch (c) {
    case Classification::NonArithmetic: return "nonarithmetic";
    case Classification::Arithmetic: return "arithmetic";
    case Classification::DegenerateArithmetic: return "degenerate_arithmetic";
  }
  return "unknown";
}

double spectral_order(const SelfSimilarParams& params) {
  std::vector<double> r;
  for (std::size_t k = 0; k < params.size(); ++k)
    if (active(params.d()[k])) r.push_back(params.a()[k] * std::abs(params.d()[k]));
  if (r.empty()) throw Error(ErrorCode::NoSpectralOrder, "all multipliers d_k vanish");
  // A single active piece has only the root D = 0.
  if (r.size() == 1) return 0.0;

  auto excess = [&](double D) {
    double s = 0.0;
    for (double x : r) s += std::pow(x, 0.5 * D);
    return s - 1.0;
  };
  double lo = 0.0;
  double hi = 1.0;
  while (excess(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > 1e-14) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::optional<ArithmeticStructure> detect_arithmetic(const SelfSimilarParams& params,
                                                     int max_denominator, double tolerance) {
  std::vector<double> logs;
  for (std::size_t k = 0; k < params.size(); ++k)
    if (active(params.d()[k])) logs.push_back(-std::log(params.a()[k] * std::abs(params.d()[k])));
  if (logs.empty()) return std::nullopt;

  const double base = logs.front();
  std::vector<std::int64_t> num, den;
  for (double l : logs) {
    const double ratio = l / base;
    bool found = false;
    for (int q = 1; q <= max_denominator && !found; ++q) {
      const double p = std::round(ratio * q);
      if (std::abs(ratio - p / q) <= tolerance) {
        num.push_back(static_cast<std::int64_t>(p));
        den.push_back(q);
        found = true;
      }
    }
    if (!found) return std::nullopt;
  }

  std::int64_t common = 1;
  for (auto q : den) common = std::lcm(common, q);
  std::vector<std::int64_t> scaled(num.size());
  std::int64_t g = 0;
  for (std::size_t i = 0; i < num.size(); ++i) {
    scaled[i] = num[i] * (common / den[i]);
    g = std::gcd(g, scaled[i]);
  }
  ArithmeticStructure out;
  out.nu = base * static_cast<double>(g) / static_cast<double>(common);
  out.multiples.reserve(scaled.size());
  for (auto s : scaled) out.multiples.push_back(s / g);
  return out;
}

SimilarityMeta compute_meta(const SelfSimilarParams& params) {
  const auto& a = params.a();
  const auto& d = params.d();
  const auto& beta = params.beta();
  const std::size_t n = params.size();

  if (params.degenerate()) throw Error(ErrorCode::NoSpectralOrder, "all multipliers d_k vanish");
  if (d.front() == 1.0 || d.back() == 1.0)
    throw Error(ErrorCode::FixedPointSingular, "d_1 = 1 or d_N = 1");

  SimilarityMeta meta;
  meta.p0 = beta.front() / (1.0 - d.front());
  meta.p1 = beta.back() / (1.0 - d.back());

  double ad = 0.0, ab = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    ad += a[k] * d[k];
    ab += a[k] * beta[k];
  }
  meta.M0 = ab / (1.0 - ad);

  // x P on piece k: x = alpha + a t, P = beta + d P(t).
  double rhs = 0.0, diag = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double alpha = params.offset(k);
    rhs += a[k] * (alpha * (beta[k] + d[k] * meta.M0) + 0.5 * a[k] * beta[k]);
    diag += a[k] * a[k] * d[k];
  }
  meta.M1 = rhs / (1.0 - diag);

  meta.D = spectral_order(params);

  if (auto arith = detect_arithmetic(params)) {
    meta.nu = arith->nu;
    bool degenerate_parity = true;
    std::size_t i = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (!active(d[k])) continue;
      const std::int64_t m = -arith->multiples[i++];
      const bool odd = (m % 2) != 0;
      meta.parity.push_back({k, m, odd});
      if ((d[k] > 0.0 && odd) || (d[k] < 0.0 && !odd)) degenerate_parity = false;
    }
    meta.classification =
        degenerate_parity ? Classification::DegenerateArithmetic : Classification::Arithmetic;
  } else {
    meta.classification = Classification::NonArithmetic;
  }
  return meta;
}

std::optional<std::size_t> cell_count(std::size_t pieces, int depth, std::size_t budget) {
  std::size_t count = 1;
  for (int i = 0; i < depth; ++i) {
    if (count > budget / pieces) return std::nullopt;
    count *= pieces;
  }
  if (count > budget) return std::nullopt;
  return count;
}

namespace {

void require_budget(const SelfSimilarParams& params, int depth, std::size_t budget) {
  if (depth < 0) throw Error(ErrorCode::InvalidArgument, "negative refinement depth");
  if (!cell_count(params.size(), depth, budget)) {
    std::ostringstream msg;
    msg << params.size() << "^" << depth << " cells exceed the budget of " << budget;
    throw Error(ErrorCode::BudgetExceeded, msg.str());
  }
}

template <typename Visit>
void descend(const SelfSimilarParams& params, int depth, const CellGeometry& cell, Visit& visit) {
  if (depth == 0) {
    visit(cell);
    return;
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    const CellGeometry child{cell.left + cell.width * params.offset(k), cell.width * params.a()[k],
                             cell.d_w * params.d()[k],
                             cell.beta_w + cell.d_w * params.beta()[k]};
    descend(params, depth - 1, child, visit);
  }
}

}  // namespace

void visit_cells(const SelfSimilarParams& params, int depth,
                 const std::function<void(const CellGeometry&)>& visit, std::size_t budget) {
  require_budget(params, depth, budget);
  descend(params, depth, CellGeometry{0.0, 1.0, 1.0, 0.0}, visit);
}

Refinement refine(const SelfSimilarParams& params, const SimilarityMeta& meta, int depth,
                  std::size_t budget) {
  require_budget(params, depth, budget);
  Refinement out;
  out.depth = depth;
  out.cells.reserve(*cell_count(params.size(), depth, budget));

  std::vector<std::uint8_t> word;
  word.reserve(static_cast<std::size_t>(depth));
  // Word-tracking variant of descend().
  std::function<void(int, const CellGeometry&)> walk = [&](int level, const CellGeometry& cell) {
    if (level == 0) {
      out.cells.push_back({word, cell.left, cell.left + cell.width, cell.d_w, cell.beta_w});
      return;
    }
    for (std::size_t k = 0; k < params.size(); ++k) {
      word.push_back(static_cast<std::uint8_t>(k));
      walk(level - 1, CellGeometry{cell.left + cell.width * params.offset(k),
                                   cell.width * params.a()[k], cell.d_w * params.d()[k],
                                   cell.beta_w + cell.d_w * params.beta()[k]});
      word.pop_back();
    }
  };
  walk(depth, CellGeometry{0.0, 1.0, 1.0, 0.0});

  // The last cell's right edge is 1 up to rounding.
  out.cells.back().right = 1.0;
  out.nodes.reserve(out.cells.size() + 1);
  out.values.reserve(out.cells.size() + 1);
  out.nodes.push_back(0.0);
  out.values.push_back(out.cells.front().beta_w + out.cells.front().d_w * meta.p0);
  for (std::size_t i = 0; i < out.cells.size(); ++i) {
    const auto& c = out.cells[i];
    const double right_value = c.beta_w + c.d_w * meta.p1;
    if (i + 1 < out.cells.size()) {
      const auto& next = out.cells[i + 1];
      const double next_left = next.beta_w + next.d_w * meta.p0;
      out.max_jump = std::max(out.max_jump, std::abs(next_left - right_value));
    }
    out.nodes.push_back(c.right);
    out.values.push_back(right_value);
  }
  out.continuous = out.max_jump <= kContinuityTolerance;
  return out;
}

CellMoments cell_moments(const CellGeometry& cell, const SimilarityMeta& meta) noexcept {
  const double h = cell.width;
  const double mean = cell.beta_w + cell.d_w * meta.M0;
  return {h * mean, h * (cell.left * mean + h * (0.5 * cell.beta_w + cell.d_w * meta.M1))};
}

CellMoments cell_moments(const CellData& cell, const SimilarityMeta& meta) noexcept {
  return cell_moments(CellGeometry{cell.left, cell.width(), cell.d_w, cell.beta_w}, meta);
}

double evaluate(const SelfSimilarParams& params, const SimilarityMeta& meta, double x,
                int levels) {
  x = std::clamp(x, 0.0, 1.0);
  if (x == 0.0) return meta.p0;
  if (x == 1.0) return meta.p1;
  double beta_w = 0.0, d_w = 1.0;
  const std::size_t n = params.size();
  for (int level = 0; level < levels && d_w != 0.0; ++level) {
    std::size_t k = 0;
    while (k + 1 < n && x >= params.offset(k + 1)) ++k;
    const double t = std::clamp((x - params.offset(k)) / params.a()[k], 0.0, 1.0);
    beta_w += d_w * params.beta()[k];
    d_w *= params.d()[k];
    x = t;
  }
  return beta_w + d_w * meta.M0;
}

}  // namespace fspec
