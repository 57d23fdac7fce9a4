#include <benchmark/benchmark.h>

#include <numbers>

#include "plate/fe_oracle.hpp"
#include "plate/greens_solver.hpp"
#include "plate/optimizer.hpp"
#include "plate/stripe_spectrum.hpp"

using namespace plate;

namespace {

const PlateParams thin = make_plate(std::numbers::pi / 150, 0.2);

void BM_SecularDet(benchmark::State& state)
{
    const auto w = TwoMaterialWeight::mass_normalized(0.5, 20.0, thin.ell);
    double l = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(secular_det(l, 3, thin, w));
        l += 1e-9;
    }
}
BENCHMARK(BM_SecularDet);

void BM_FirstEvenStripe(benchmark::State& state)
{
    const auto w = TwoMaterialWeight::mass_normalized(0.5, 1.5, thin.ell);
    const int m = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(first_even_eigenvalue(m, thin, w).lambda);
}
BENCHMARK(BM_FirstEvenStripe)->Arg(1)->Arg(10)->Unit(benchmark::kMicrosecond);

void BM_UnweightedFirst(benchmark::State& state)
{
    for (auto _ : state) benchmark::DoNotOptimize(unweighted_first(1, thin).lambda);
}
BENCHMARK(BM_UnweightedFirst)->Unit(benchmark::kMicrosecond);

void BM_InversePower(benchmark::State& state)
{
    const auto w = TwoMaterialWeight::mass_normalized(0.5, 1.5, thin.ell).to_piecewise();
    GreenOptions opts;
    opts.cells = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(inverse_power_first(w, 1, thin, 1e-13, opts).lambda);
}
BENCHMARK(BM_InversePower)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_FeExtrapolated(benchmark::State& state)
{
    const auto w = TwoMaterialWeight::mass_normalized(0.5, 20.0, 0.5).to_piecewise();
    const auto p = make_plate(0.5, 0.2);
    for (auto _ : state) benchmark::DoNotOptimize(fd_first_eigen(w, 1, p).extrapolated);
}
BENCHMARK(BM_FeExtrapolated)->Unit(benchmark::kMillisecond);

void BM_Table1(benchmark::State& state)
{
    for (auto _ : state) benchmark::DoNotOptimize(table1(thin, 10, false).lambda.size());
}
BENCHMARK(BM_Table1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
