#pragma once

// Self-similar functions on [0,1] given by an affine IFS:
//   P(alpha_{k-1} + a_k t) = beta_k + d_k P(t),  t in [0,1],
// with alpha_0 = 0, alpha_k = a_1 + ... + a_k.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace fspec {

struct RawParams {
  std::vector<double> a;
  std::vector<double> d;
  std::vector<double> beta;
};

class SelfSimilarParams {
 public:
  /// Checks every invariant; throws fspec::Error, never normalizes.
  static SelfSimilarParams validate(const RawParams& raw);

  std::size_t size() const noexcept { return a_.size(); }
  const std::vector<double>& a() const noexcept { return a_; }
  const std::vector<double>& d() const noexcept { return d_; }
  const std::vector<double>& beta() const noexcept { return beta_; }
  /// Left endpoint alpha_{k} of piece k (0-based).
  double offset(std::size_t k) const noexcept { return alpha_[k]; }
  /// True when every d_k vanishes (P is a step function).
  bool degenerate() const noexcept;

  /// P -> -P, i.e. beta -> -beta with d unchanged.
  SelfSimilarParams negated() const;

 private:
  std::vector<double> a_, d_, beta_, alpha_;
};

SelfSimilarParams validate_params(const RawParams& raw);

enum class Classification { NonArithmetic, Arithmetic, DegenerateArithmetic };

const char* to_string(Classification c) noexcept;

struct PieceParity {
  std::size_t piece;      // 0-based index of an active piece (d_k != 0)
  std::int64_t multiple;  // ln(a_k |d_k|) / nu, a negative integer
  bool odd;
};

struct SimilarityMeta {
  double p0 = 0.0;  // P(0)
  double p1 = 0.0;  // P(1)
  double M0 = 0.0;  // integral of P
  double M1 = 0.0;  // integral of x P
  double D = 0.0;   // spectral order
  Classification classification = Classification::NonArithmetic;
  /// Arithmetic step; unset for non-arithmetic weights.
  std::optional<double> nu;
  std::vector<PieceParity> parity;

  double half_order() const noexcept { return 0.5 * D; }
};

SimilarityMeta compute_meta(const SelfSimilarParams& params);

/// Root D > 0 of sum over active pieces of (a_k |d_k|)^{D/2} = 1.
double spectral_order(const SelfSimilarParams& params);

struct ArithmeticStructure {
  double nu;
  std::vector<std::int64_t> multiples;  // -ln(a_k |d_k|) / nu, aligned with active pieces
};

/// Bounded-denominator rational dependence test on ln(a_k |d_k|).
std::optional<ArithmeticStructure> detect_arithmetic(const SelfSimilarParams& params,
                                                     int max_denominator = 64,
                                                     double tolerance = 1e-9);

struct CellData {
  std::vector<std::uint8_t> word;
  double left = 0.0;
  double right = 1.0;
  double d_w = 1.0;
  double beta_w = 0.0;

  double width() const noexcept { return right - left; }
};

/// Word-free view of a cell, used by the visitor.
struct CellGeometry {
  double left;
  double width;
  double d_w;
  double beta_w;
};

inline constexpr std::size_t kDefaultCellBudget = std::size_t{1} << 22;

/// Number of level-m cells, or nullopt when it exceeds `budget`.
std::optional<std::size_t> cell_count(std::size_t pieces, int depth, std::size_t budget);

/// Visits level-m cells left to right without materialising words.
void visit_cells(const SelfSimilarParams& params, int depth,
                 const std::function<void(const CellGeometry&)>& visit,
                 std::size_t budget = kDefaultCellBudget);

struct Refinement {
  int depth = 0;
  std::vector<CellData> cells;
  /// Node coordinates x_0 = 0 < ... < x_n = 1.
  std::vector<double> nodes;
  /// P at each node; at an interior node this is the left cell's right value.
  std::vector<double> values;
  /// Largest jump right_value(cell i) vs left_value(cell i+1).
  double max_jump = 0.0;
  bool continuous = true;
};

inline constexpr double kContinuityTolerance = 1e-12;

Refinement refine(const SelfSimilarParams& params, const SimilarityMeta& meta, int depth,
                  std::size_t budget = kDefaultCellBudget);

struct CellMoments {
  double mass;   // integral of P over the cell
  double first;  // integral of x P over the cell
};

CellMoments cell_moments(const CellGeometry& cell, const SimilarityMeta& meta) noexcept;
CellMoments cell_moments(const CellData& cell, const SimilarityMeta& meta) noexcept;

/// Pointwise evaluation by following the address of x for `levels` steps
/// and closing with the mean value M0.
double evaluate(const SelfSimilarParams& params, const SimilarityMeta& meta, double x,
                int levels = 48);

}  // namespace fspec
