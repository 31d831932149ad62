#include <benchmark/benchmark.h>

#include <numbers>

#include "fscm/fem.hpp"
#include "fscm/fourier.hpp"
#include "fscm/geometry.hpp"
#include "fscm/manufactured.hpp"
#include "fscm/mesh.hpp"
#include "fscm/singular_basis.hpp"

namespace {

using namespace fscm;

void BM_Assemble(benchmark::State& state) {
  const auto mesh = triangulate(make_l_section(), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble(mesh, 1.0));
  state.counters["vertices"] = static_cast<double>(mesh->vertex_count());
}
BENCHMARK(BM_Assemble)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_PcgSolve(benchmark::State& state) {
  const auto mesh = triangulate(make_l_section(), static_cast<int>(state.range(0)));
  const FemSystem system = assemble(mesh, std::numbers::pi * std::numbers::pi);
  const NodalField rhs = load_vector(mesh, [](Point2) { return 1.0; });
  const NodalField zero(mesh);
  SolveStats stats;
  for (auto _ : state) benchmark::DoNotOptimize(solve(system, rhs, zero, {}, &stats));
  state.counters["iterations"] = stats.iterations;
}
BENCHMARK(BM_PcgSolve)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SingularBasis(benchmark::State& state) {
  const PolygonalSection section = make_l_section();
  const auto mesh = triangulate(section, static_cast<int>(state.range(0)));
  const FemSystem system = assemble(mesh, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(build_singular_basis(system.matrices, section));
}
BENCHMARK(BM_SingularBasis)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_ModeLoop(benchmark::State& state) {
  const PrismSpec prism{make_l_section(), 1.0};
  const ManufacturedProblem3D problem = problem_singular3d(prism);
  FscmOptions options;
  options.threads = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(fscm_solve(prism, problem.f, 32, static_cast<int>(state.range(0)), options));
}
BENCHMARK(BM_ModeLoop)->Args({8, 1})->Args({8, 4})->Args({16, 4})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
