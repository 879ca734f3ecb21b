#include <benchmark/benchmark.h>

#include "frankdefect/profile.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

void BM_ProfileRhs(benchmark::State& state) {
    double th = 1.0, ps = 1.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(frankdefect::profile_rhs(th, ps, 4.0, 1.0));
    }
}
BENCHMARK(BM_ProfileRhs);

void BM_SolveProfile(benchmark::State& state) {
    auto nodes = frankdefect::default_theta_grid((std::size_t)state.range(0));
    for (auto _ : state) {
        auto sol = frankdefect::solve_profile_on(4.0, 1.0, 1.0, 1e-10, nodes);
        benchmark::DoNotOptimize(sol.psi.data());
    }
}
BENCHMARK(BM_SolveProfile)->Arg(129)->Arg(513)->Arg(1025);

void BM_SolveBranchFalling(benchmark::State& state) {
    for (auto _ : state) {
        auto sol = frankdefect::solve_branch(2.0, 1.0, 3 * kPi / 2);
        benchmark::DoNotOptimize(sol.psi.data());
    }
}
BENCHMARK(BM_SolveBranchFalling);

}  // namespace

BENCHMARK_MAIN();
