#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "equilib/diagnostics.hpp"
#include "equilib/meanfield.hpp"
#include "equilib/solver.hpp"
#include "equilib/system.hpp"

using namespace equilib;

namespace {

ProblemSpec bench_spec() {
  return ProblemSpec{Dimension(2), InteractionSpec::gaussian(0.3, 1.0),
                     PotentialSpec::quadratic(1.0)};
}

void BM_hamiltonian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Configuration cfg = random_configuration(n, ChargePattern::all_plus, 1.0, 1);
  ProblemSpec spec = bench_spec();
  for (auto _ : state) {
    benchmark::DoNotOptimize(hamiltonian(cfg, spec));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_hamiltonian)->Range(64, 1024)->Complexity(benchmark::oNSquared);

void BM_residuals(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Configuration cfg = random_configuration(n, ChargePattern::all_plus, 1.0, 2);
  ProblemSpec spec = bench_spec();
  for (auto _ : state) {
    benchmark::DoNotOptimize(residuals(cfg, spec));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_residuals)->Range(64, 1024)->Complexity(benchmark::oNSquared);

void BM_hessian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Configuration cfg = random_configuration(n, ChargePattern::all_plus, 1.0, 3);
  ProblemSpec spec = bench_spec();
  for (auto _ : state) {
    benchmark::DoNotOptimize(hamiltonian_hess(cfg, spec));
  }
}
BENCHMARK(BM_hessian)->Range(64, 256);

void BM_flux_integral(benchmark::State& state) {
  Configuration cfg = random_configuration(32, ChargePattern::all_plus, 1.0, 4);
  ProblemSpec spec = bench_spec();
  FieldEvaluator field(cfg, spec);
  const double delta = 0.4 * cfg.min_gap();
  for (auto _ : state) {
    benchmark::DoNotOptimize(flux_integral(field, cfg.position(0), delta, 512));
  }
}
BENCHMARK(BM_flux_integral);

void BM_continuum_vorticity(benchmark::State& state) {
  const int grid = static_cast<int>(state.range(0));
  GriddedMeasure disk = equilibrium_disk(1.0, grid);
  ProblemSpec spec = ProblemSpec{Dimension(2), InteractionSpec::zero(),
                                 PotentialSpec::quadratic(1.0)};
  TestField phi = TestField::rotational_bump(Eigen::Vector2d::Zero(), 1.6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(continuum_vorticity_residual(disk, spec, phi));
  }
}
BENCHMARK(BM_continuum_vorticity)->Arg(32)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
