// Serial reference vs OpenMP replicate loop on the two hot kernels.
// Arg 0 selects the policy (0 serial, 1 OpenMP).

#include <benchmark/benchmark.h>

#include "harnack/registry.h"
#include "harnack/sampler.h"

using namespace harnack;

namespace {

ExecPolicy policy_of(const benchmark::State& state) {
  return state.range(0) ? ExecPolicy::kParallel : ExecPolicy::kSerial;
}

OuLevyModel jump_model() {
  Matrix A(2, 2), R(2, 2);
  A << -1.0, 0.4, 0.0, -0.6;
  R << 1.0, 0.2, 0.2, 0.5;
  Vector j1(2), j2(2);
  j1 << 0.5, 0.0;
  j2 << -0.3, 0.8;
  return OuLevyModel(A, R, Vector::Zero(2),
                     CompoundPoissonSpec::from_atoms(1.5, {{j1, 0.6}, {j2, 0.4}}));
}

void BM_EstimateSemigroup(benchmark::State& state) {
  const OuLevyModel model = jump_model();
  const TestFunctionSpec f = make_test_function("sigmoid", 2);
  const Vector x = Vector::Constant(2, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_semigroup(model, 1.0, x, f.f, 200000, 17, policy_of(state)));
  }
  state.SetItemsProcessed(state.iterations() * 200000);
}
BENCHMARK(BM_EstimateSemigroup)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_SemilinearReplicates(benchmark::State& state) {
  const OuLevyModel model(Matrix::Constant(1, 1, -1.0), Matrix::Constant(1, 1, 2.0), Vector::Zero(1));
  const SemilinearSpec F = make_semilinear("scaled_sine:0.3", model);
  const TestFunctionSpec f = make_test_function("sigmoid", 1);
  const Vector x = Vector::Constant(1, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(semilinear_replicates(model, F, 1.0, x, f.f, 4000, 128, 5, policy_of(state)));
  }
  state.SetItemsProcessed(state.iterations() * 4000);
}
BENCHMARK(BM_SemilinearReplicates)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
