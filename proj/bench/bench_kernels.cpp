// Serial reference vs OpenMP kernels.
#include <benchmark/benchmark.h>

#include "sdcr/verification.hpp"

using namespace sdcr;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(1) == 0 ? Execution::Serial : Execution::Parallel;
}

void label(benchmark::State& state) { state.SetLabel(state.range(1) == 0 ? "serial" : "parallel"); }

void BM_AssembleSystem(benchmark::State& state) {
  const Mesh mesh = build_structured_mesh(static_cast<int>(state.range(0)));
  const DofMap dofs = build_dof_map(mesh);
  const MaterialParams params;
  const ExactCase exact(params, mesh.domain());
  AssemblyOptions opts;
  opts.execution = mode(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_system(mesh, dofs, params, exact.source(), opts));
  }
  label(state);
}

void BM_ErrorNorms(benchmark::State& state) {
  const Mesh mesh = build_structured_mesh(static_cast<int>(state.range(0)));
  const DofMap dofs = build_dof_map(mesh);
  const MaterialParams params;
  const ExactCase exact(params, mesh.domain());
  const SaddleSolution sol = solve_saddle(assemble_system(mesh, dofs, params, exact.source()));
  ErrorOptions opts;
  opts.execution = mode(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_error_norms(mesh, dofs, sol, exact, opts));
  }
  label(state);
}

void BM_NormGram(benchmark::State& state) {
  const Mesh mesh = build_structured_mesh(static_cast<int>(state.range(0)));
  const DofMap dofs = build_dof_map(mesh);
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_norm_gram(mesh, dofs, MaterialParams{}, mode(state)));
  }
  label(state);
}

}  // namespace

BENCHMARK(BM_AssembleSystem)->ArgsProduct({{16, 32, 64}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ErrorNorms)->ArgsProduct({{16, 32, 64}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NormGram)->ArgsProduct({{16, 32, 64}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
