#include <benchmark/benchmark.h>

#include <vector>

#include "longevity/mortality.hpp"
#include "longevity/pooling.hpp"
#include "longevity/pricing.hpp"
#include "longevity/specfun.hpp"

namespace {

using longevity::GompertzLaw;

void BM_IncompleteGammaScaled(benchmark::State& state) {
    // One argument per region: continued fraction, lower series, small order.
    const std::vector<std::pair<double, double>> args = {
        {-0.36, 0.0031}, {-0.5, 3.0}, {2.5, 1.2}, {-4.7, 0.4}, {0.0, 0.01}};
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& [alpha, x] = args[i++ % args.size()];
        benchmark::DoNotOptimize(longevity::specfun::upper_incomplete_gamma_scaled(alpha, x));
    }
}
BENCHMARK(BM_IncompleteGammaScaled);

void BM_AnnuityFactorClosed(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(longevity::annuity_factor_mb(0.03, 65.0, 87.25, 9.5));
    }
}
BENCHMARK(BM_AnnuityFactorClosed);

void BM_AnnuityFactorQuadrature(benchmark::State& state) {
    const GompertzLaw law(87.25, 9.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(longevity::annuity_factor_quadrature(0.03, law, 65.0));
    }
}
BENCHMARK(BM_AnnuityFactorQuadrature);

void BM_Moments(benchmark::State& state) {
    const GompertzLaw law(87.25, 9.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(longevity::moments(law, 65.0));
    }
}
BENCHMARK(BM_Moments);

void BM_AewGroup(benchmark::State& state) {
    const GompertzLaw individual(75.02, 11.87);
    const GompertzLaw group(85.45, 12.41);
    for (auto _ : state) {
        benchmark::DoNotOptimize(longevity::aew_group(0.03, individual, group, 65.0, 3.0));
    }
}
BENCHMARK(BM_AewGroup);

void BM_UtilityOracle(benchmark::State& state) {
    const GompertzLaw individual(75.02, 11.87);
    const GompertzLaw group(85.45, 12.41);
    const double gamma = static_cast<double>(state.range(0)) / 2.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            longevity::utility_oracle_delta(0.03, individual, group, 65.0, gamma));
    }
}
BENCHMARK(BM_UtilityOracle)->Arg(1)->Arg(2)->Arg(6);

void BM_DeltaVsGSweep(benchmark::State& state) {
    std::vector<double> g_grid;
    for (int i = 0; i <= 50; ++i) g_grid.push_back(0.02 + 0.002 * i);
    const longevity::FixedHazards hazards{{0.005, 0.01, 0.02}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(longevity::delta_vs_g_sweep(0.03, 3.0, 65.0, g_grid, hazards));
    }
}
BENCHMARK(BM_DeltaVsGSweep);

}  // namespace

BENCHMARK_MAIN();
