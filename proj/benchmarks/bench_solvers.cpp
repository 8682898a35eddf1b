#include <benchmark/benchmark.h>

#include "mfgstop/forward.hpp"
#include "mfgstop/mfg.hpp"
#include "mfgstop/montecarlo.hpp"
#include "mfgstop/obstacle.hpp"

namespace {

using namespace mfgstop;

MfgProblem congestion(std::size_t n) {
    const auto grid = build_grid(1.0, 0.0, 1.0, n, n);
    DiffusionModel model{{CoefficientFn::constant(0.0), CoefficientFn::constant(1.0)},
                         {CoefficientFn::constant(0.5), CoefficientFn::constant(1.0)},
                         0.5};
    RewardSpec spec;
    spec.terms.push_back({FBarFn::linear(1.0, 2.0), CoefficientFn::constant(1.0)});
    return make_problem(grid, model, InitialMeasure::uniform(grid), spec);
}

void BM_TransitionOperator(benchmark::State& state) {
    const auto p = congestion(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(build_transition_operator(p.model, p.grid));
}

void BM_SolveVi(benchmark::State& state) {
    const auto p = congestion(static_cast<std::size_t>(state.range(0)));
    const Field f = evaluate_reward(p.reward, MeasureFamily::zero(p.grid));
    for (auto _ : state) benchmark::DoNotOptimize(solve_vi(f, p.transition, p.grid.dt()));
    state.SetComplexityN(state.range(0) * state.range(0));
}

void BM_StoppedForwardMeasure(benchmark::State& state) {
    const auto p = congestion(static_cast<std::size_t>(state.range(0)));
    const Field f = evaluate_reward(p.reward, MeasureFamily::zero(p.grid));
    const auto v = solve_vi(f, p.transition, p.grid.dt());
    for (auto _ : state) benchmark::DoNotOptimize(stopped_forward_measure(v, p.initial, p.transition));
    state.SetComplexityN(state.range(0) * state.range(0));
}

void BM_FixedPointSolve(benchmark::State& state) {
    const auto p = congestion(static_cast<std::size_t>(state.range(0)));
    const auto zero = MeasureFamily::zero(p.grid);
    for (auto _ : state) benchmark::DoNotOptimize(fixed_point_solve(p, zero));
}

void BM_SimulatePaths(benchmark::State& state) {
    const auto p = congestion(100);
    const Field f = evaluate_reward(p.reward, MeasureFamily::zero(p.grid));
    const auto v = solve_vi(f, p.transition, p.grid.dt());
    const auto paths = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_paths(p.model, p.grid, v, p.initial, {paths, 1, true}));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_TransitionOperator)->RangeMultiplier(2)->Range(50, 400);
BENCHMARK(BM_SolveVi)->RangeMultiplier(2)->Range(50, 400)->Complexity(benchmark::oN);
BENCHMARK(BM_StoppedForwardMeasure)->RangeMultiplier(2)->Range(50, 400)->Complexity(benchmark::oN);
BENCHMARK(BM_FixedPointSolve)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulatePaths)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
