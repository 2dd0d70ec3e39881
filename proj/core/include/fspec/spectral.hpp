#pragma once

// Piecewise-linear Galerkin discretisation of the pencil
//   <T(lambda) y, z> = int y' z' + lambda P (y z)'
// on the level-m IFS mesh, with Dirichlet conditions at 0 and 1. The
// counting function ind T(lambda) is the negative index of A + lambda B.

#include <cstddef>
#include <span>
#include <vector>

#include "fspec/selfsim.hpp"

namespace fspec {

enum class Side { Positive, Negative };

inline double sign_of(Side side) noexcept { return side == Side::Positive ? 1.0 : -1.0; }
const char* to_string(Side side) noexcept;

/// Symmetric tridiagonal A (stiffness) and B (weight) on interior nodes.
struct Pencil {
  int depth = 0;
  std::vector<double> nodes;  // interior node coordinates
  std::vector<double> a_diag, a_off;
  std::vector<double> b_diag, b_off;
  SimilarityMeta meta;

  std::size_t size() const noexcept { return a_diag.size(); }
};

Pencil assemble_pencil(const SelfSimilarParams& params, const SimilarityMeta& meta, int depth,
                       std::size_t budget = kDefaultCellBudget);

struct InertiaResult {
  std::size_t count = 0;
  /// Some pivot fell within rounding of zero: lambda is (nearly) an eigenvalue.
  /// The count then follows the strict-inequality convention.
  bool near_singular = false;
};

/// Number of negative eigenvalues of A + lambda B (Sturm/LDL^T pivots).
InertiaResult inertia(const Pencil& pencil, double lambda);

inline constexpr double kEigenRelTol = 1e-8;

/// First `count` eigenvalues on the chosen ray, signed and ordered by |lambda|.
std::vector<double> eigenvalues(const Pencil& pencil, Side side, std::size_t count,
                                double rel_tol = kEigenRelTol);

struct CountingSample {
  double lambda;  // signed
  std::size_t ind;
  bool near_singular;
};

struct CountingSeries {
  Side side = Side::Positive;
  std::vector<CountingSample> samples;
  int depth = 0;
  double D = 0.0;
  std::optional<double> nu;
  Classification classification = Classification::NonArithmetic;
  bool monotone = true;
};

/// One inertia evaluation per |lambda| in `magnitudes` (sorted, positive).
CountingSeries counting_series(const Pencil& pencil, Side side, std::span<const double> magnitudes);

/// n log-spaced magnitudes in [lo, hi].
std::vector<double> log_grid(double lo, double hi, std::size_t points);

struct ConvergedEigenvalues {
  Side side = Side::Positive;
  std::vector<double> values;    // at the final depth
  std::vector<double> previous;  // at the depth before
  std::vector<double> rel_gap;   // |values - previous| / |values|
  int depth = 0;
  bool converged = false;
};

struct ConvergencePolicy {
  int depth_min = -1;  // -1: smallest m with N^m >= 16 count
  int depth_max = 12;
  double tol = 0.005;
  std::size_t budget = kDefaultCellBudget;
};

/// Raises the depth until every eigenvalue moves by less than `tol` between
/// consecutive depths, or depth_max is reached (converged = false).
ConvergedEigenvalues converged_eigenvalues(const SelfSimilarParams& params,
                                           const SimilarityMeta& meta, Side side,
                                           std::size_t count, const ConvergencePolicy& policy = {});

}  // namespace fspec
