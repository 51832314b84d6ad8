// Serial reference vs OpenMP kernels. Arg 0 selects the variant: 0 serial, 1 parallel.
#include <benchmark/benchmark.h>

#include "rankvarma/adaptive.hpp"
#include "rankvarma/kernels.hpp"
#include "rankvarma/mc.hpp"
#include "rankvarma/rng.hpp"
#include "rankvarma/structmat.hpp"

using namespace rankvarma;

namespace {

Exec variant(const benchmark::State& st) { return st.range(0) == 0 ? Exec::serial : Exec::parallel; }

Matrix gaussian_matrix(int r, int c, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  Matrix m(r, c);
  for (int j = 0; j < c; ++j)
    for (int i = 0; i < r; ++i) m(i, j) = rng.normal();
  return m;
}

void BM_lagged_products(benchmark::State& st) {
  const int n = static_cast<int>(st.range(1)), k = 3;
  const Vector a = gaussian_matrix(n, 1, 1), b = gaussian_matrix(n, 1, 2);
  const Series w = gaussian_matrix(k, n, 3);
  for (auto _ : st) benchmark::DoNotOptimize(lagged_products(a, b, w, n - 1, variant(st)));
}

void BM_accumulate_information(benchmark::State& st) {
  VarmaSpec null;
  null.k = 3;
  null.ar = {0.5 * Matrix::Identity(3, 3)};
  null.ma = {0.3 * Matrix::Identity(3, 3)};
  const StructuralSet ss = build_structural(null, 2, 1, static_cast<int>(st.range(1)));
  Matrix sigma = Matrix::Identity(3, 3);
  sigma(0, 1) = sigma(1, 0) = 0.4;
  for (auto _ : st) benchmark::DoNotOptimize(ss.J(sigma, -1, variant(st)));
}

void BM_run_experiment(benchmark::State& st) {
  Experiment e;
  e.null.k = 2;
  e.null.ar = {0.4 * Matrix::Identity(2, 2)};
  e.p1 = 2;
  e.n = 300;
  e.replications = static_cast<int>(st.range(1));
  e.burn_in = 100;
  for (auto _ : st) benchmark::DoNotOptimize(run_experiment(e, variant(st)));
}

void BM_adaptive_table(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  CounterRng rng(4, 0);
  const Series z = sample_elliptical(RadialLaw(RadialDensity::gaussian(), 2), Matrix::Identity(2, 2), n, rng);
  const auto est = RadialDensityEstimate::fit(tyler_residuals(tyler_fit(z), z).d, 2);
  for (auto _ : st) benchmark::DoNotOptimize(est.table());
}

}  // namespace

BENCHMARK(BM_lagged_products)->ArgNames({"parallel", "n"})->ArgsProduct({{0, 1}, {500, 2000, 8000}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_accumulate_information)->ArgNames({"parallel", "n"})->ArgsProduct({{0, 1}, {200, 1000}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_run_experiment)->ArgNames({"parallel", "reps"})->ArgsProduct({{0, 1}, {16, 64}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_adaptive_table)->ArgName("n")->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
