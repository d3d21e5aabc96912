#include <benchmark/benchmark.h>

#include "shearspec/discretize.hpp"
#include "shearspec/evolve.hpp"
#include "shearspec/resolvent.hpp"
#include "shearspec/semiclassical.hpp"

namespace ss = shearspec;

namespace {

ss::GridDomain grid_for(int n) {
  return n > 0 ? ss::GridDomain::interval(n, ss::Boundary::neumann)
               : ss::GridDomain::torus2d(-n, 4);
}

const char* profile_for(int n) { return n > 0 ? "couette" : "kolmogorov"; }

}  // namespace

// Negative arguments select the n x 4 Kolmogorov torus.
void BM_Assemble(benchmark::State& state) {
  const ss::GridDomain d = grid_for(static_cast<int>(state.range(0)));
  const ss::VelocityProfile p = ss::get_profile(profile_for(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(ss::assemble(d, p, 1e-4, 1.0, 0.1));
}
BENCHMARK(BM_Assemble)->Arg(1024)->Arg(4096)->Arg(-256);

void BM_SigmaMin(benchmark::State& state, ss::SigmaMethod method) {
  const ss::GridDomain d = grid_for(static_cast<int>(state.range(0)));
  const ss::VelocityProfile p = ss::get_profile(profile_for(static_cast<int>(state.range(0))));
  const ss::OperatorMatrix op = ss::assemble(d, p, 1e-4, 1.0, 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(ss::smallest_singular_value(op, {method}).sigma);
}
BENCHMARK_CAPTURE(BM_SigmaMin, iterative, ss::SigmaMethod::inverse_iteration)->Arg(1024)->Arg(4096)->Arg(-256)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SigmaMin, dense, ss::SigmaMethod::dense_svd)->Arg(256)->Arg(1024)
    ->Unit(benchmark::kMillisecond);

void BM_PsiScan(benchmark::State& state) {
  const ss::GridDomain d = grid_for(static_cast<int>(state.range(0)));
  const ss::VelocityProfile p = ss::get_profile("couette");
  for (auto _ : state) benchmark::DoNotOptimize(ss::pseudospectral_abscissa(d, p, 1e-4, 1.0).psi);
}
BENCHMARK(BM_PsiScan)->Arg(1024)->Unit(benchmark::kMillisecond);

// 100 Crank-Nicolson steps including the one-off factorisation.
void BM_CrankNicolson(benchmark::State& state) {
  const ss::GridDomain d = grid_for(static_cast<int>(state.range(0)));
  const ss::VelocityProfile p = ss::get_profile(profile_for(static_cast<int>(state.range(0))));
  const ss::ScalarField g0 = ss::default_initial_condition(d, p);
  for (auto _ : state) benchmark::DoNotOptimize(ss::evolve(d, p, 1e-3, 1.0, g0, 1.0, 0.01).norms.back());
}
BENCHMARK(BM_CrankNicolson)->Arg(1024)->Arg(-256)->Unit(benchmark::kMillisecond);

void BM_GroundState(benchmark::State& state) {
  const ss::GridDomain d = ss::GridDomain::interval(static_cast<int>(state.range(0)), ss::Boundary::neumann);
  const ss::VelocityProfile w = ss::get_profile("poiseuille");
  for (auto _ : state) benchmark::DoNotOptimize(ss::ground_state(d, w, 1e-4).lambda_min);
}
BENCHMARK(BM_GroundState)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
