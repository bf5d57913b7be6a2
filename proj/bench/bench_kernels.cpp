// Serial reference against the OpenMP kernels. Both policies give bit-identical results,
// so the numbers compare cost only.

#include <benchmark/benchmark.h>

#include <memory>

#include "layerfem/assembly.hpp"
#include "layerfem/norms.hpp"
#include "layerfem/study.hpp"

using namespace layerfem;

namespace {

Execution policy(const benchmark::State& state) { return state.range(0) == 0 ? Execution::sequential : Execution::parallel; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "sequential" : "parallel"); }

void BM_AssembleHermite(benchmark::State& state)
{
    const auto problem = make_problem(ProblemId::cd4_clamped, 1e-6);
    const auto space = primal_space(problem, shishkin_mesh(1e-6, 1.0 / 256, 2.0, RefinedSides::left), 3);
    AssemblyOptions options;
    options.execution = policy(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(assemble_order4(problem, space, options));
    }
    label(state);
}
BENCHMARK(BM_AssembleHermite)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_AssembleMixed(benchmark::State& state)
{
    const auto problem = make_problem(ProblemId::mix4, 1e-8);
    const auto spaces = mixed_spaces(problem, two_region_mesh(1e-8, 1.0 / 256, 0.75, 1.0, RefinedSides::both), 2);
    AssemblyOptions options;
    options.execution = policy(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(assemble_mixed(problem, *spaces.u, *spaces.w, options));
    }
    label(state);
}
BENCHMARK(BM_AssembleMixed)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_LayerSeminorm(benchmark::State& state)
{
    const double eps = 1e-6;
    const Evaluator layer = [eps](double x, int j) { return LayerTerm{1.0, Side::left}.eval(x, j, eps); };
    const auto mesh = shishkin_mesh(eps, 1.0 / 512, 2.0, RefinedSides::left);
    NormOptions options;
    options.rel_tol = 1e-10;
    options.layers = {eps, true, false};
    options.execution = policy(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(seminorm(layer, mesh, 1, options));
    }
    label(state);
}
BENCHMARK(BM_LayerSeminorm)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State& state)
{
    CaseConfig config;
    config.problem = ProblemId::rd2;
    config.k = 2;
    config.mesh = MeshFamily::two_region;
    const auto execution = policy(state);
    config.execution = execution;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_sweep(config, {1e-4, 1e-6, 1e-8}, {1.0 / 16, 1.0 / 32, 1.0 / 64}, execution));
    }
    label(state);
}
BENCHMARK(BM_Sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
