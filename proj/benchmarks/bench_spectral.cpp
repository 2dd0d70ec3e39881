#include <benchmark/benchmark.h>

#include <numbers>

#include "fspec/renewal.hpp"
#include "fspec/spectral.hpp"

namespace {

using namespace fspec;

const SelfSimilarParams& three_piece() {
  static const auto p =
      validate_params({{1.0 / 3, 1.0 / 3, 1.0 / 3}, {-0.5, 0.0, -0.5}, {0.0, 0.5, 0.5}});
  return p;
}

void BM_Assemble(benchmark::State& state) {
  const auto& p = three_piece();
  const auto meta = compute_meta(p);
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_pencil(p, meta, depth));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(*cell_count(3, depth, kDefaultCellBudget)));
}
BENCHMARK(BM_Assemble)->DenseRange(6, 12, 2)->Unit(benchmark::kMillisecond);

void BM_Inertia(benchmark::State& state) {
  const auto& p = three_piece();
  const auto pencil = assemble_pencil(p, compute_meta(p), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(inertia(pencil, 1e5));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(pencil.size()));
}
BENCHMARK(BM_Inertia)->DenseRange(6, 12, 2)->Unit(benchmark::kMicrosecond);

void BM_Eigenvalues(benchmark::State& state) {
  const auto& p = three_piece();
  const auto pencil = assemble_pencil(p, compute_meta(p), 8);
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues(pencil, Side::Positive, 12));
}
BENCHMARK(BM_Eigenvalues)->Unit(benchmark::kMillisecond);

void BM_NonArithmeticMarch(benchmark::State& state) {
  const RenewalCoefficients c{{0.3, 0.0}, {0.0, 0.7}, {1.0, std::numbers::phi}};
  const auto g = Forcing::gaussian(0.0, 1.0);
  NonArithmeticOptions o;
  o.step = 1e-3;
  o.t_max = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_nonarithmetic(c, g, Forcing{}, o));
}
BENCHMARK(BM_NonArithmeticMarch)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
