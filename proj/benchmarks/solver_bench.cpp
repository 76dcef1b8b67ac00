#include <benchmark/benchmark.h>

#include <cmath>

#include "nlac/initial_conditions.hpp"
#include "nlac/kernel.hpp"
#include "nlac/potentials.hpp"
#include "nlac/spectral.hpp"
#include "nlac/stepper.hpp"

using namespace nlac;

namespace {

// Sweep the argument so the closed forms cannot be folded away.
void bench_prox(benchmark::State& state, const PotentialSpec& pot) {
  const ProxWeight w{203.0, 1};
  double v = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(prox(pot, w, v));
    v += 0.001;
    if (v > 3.0) v = -3.0;
  }
}

void BM_ProxObstacle(benchmark::State& state) {
  bench_prox(state, PotentialSpec::obstacle(1.0));
}
void BM_ProxRegular(benchmark::State& state) { bench_prox(state, PotentialSpec::regular(1.0)); }
void BM_ProxLogarithmic(benchmark::State& state) {
  bench_prox(state, PotentialSpec::logarithmic(1.0, 0.2));
}

void BM_Convolve1d(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g = make_grid(1, {n, 1, 1}, {1.0, 0.0, 0.0});
  SpectralContext ctx(g);
  const KernelGrid k = sample_periodic(KernelSpec{0.1, 0.1, 1}, g, ctx);
  const Field u = make_initial_condition({"double_sine", {}}, g, 0);
  for (auto _ : state) benchmark::DoNotOptimize(circular_convolve(u, k, ctx).data[0]);
  state.SetItemsProcessed(state.iterations() * n);
}

void BM_Convolve2d(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g = make_grid(2, {n, n, 1}, {1.0, 1.0, 0.0});
  SpectralContext ctx(g);
  const KernelGrid k = sample_periodic(KernelSpec{0.1, 0.1, 2}, g, ctx);
  const Field u = make_initial_condition({"cosine_product", {}}, g, 0);
  for (auto _ : state) benchmark::DoNotOptimize(circular_convolve(u, k, ctx).data[0]);
  state.SetItemsProcessed(state.iterations() * g.size());
}

SchemeConfig step_config(Scheme scheme, const PotentialSpec& pot) {
  SchemeConfig cfg;
  cfg.scheme = scheme;
  cfg.tau = 0.005;
  cfg.steps = 1;
  cfg.potential = pot;
  return cfg;
}

void BM_StepFirstOrder(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g = make_grid(2, {n, n, 1}, {1.0, 1.0, 0.0});
  SpectralContext ctx(g);
  const KernelGrid k = sample_periodic(KernelSpec{0.1, 0.1, 2}, g, ctx);
  const Field u = make_initial_condition({"cosine_product", {}}, g, 0);
  const SchemeConfig cfg = step_config(Scheme::FirstOrder, PotentialSpec::obstacle(1.0));
  for (auto _ : state) benchmark::DoNotOptimize(step_first_order(u, k, cfg, ctx).data[0]);
  state.SetItemsProcessed(state.iterations() * g.size());
}

void BM_StepImplicit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g = make_grid(2, {n, n, 1}, {1.0, 1.0, 0.0});
  SpectralContext ctx(g);
  const KernelGrid k = sample_periodic(KernelSpec{0.1, 0.1, 2}, g, ctx);
  const Field u = make_initial_condition({"cosine_product", {}}, g, 0);
  const SchemeConfig cfg =
      step_config(Scheme::SecondOrderImplicit, PotentialSpec::regular(1.0));
  for (auto _ : state)
    benchmark::DoNotOptimize(step_second_order_implicit(u, k, cfg, ctx).u.data[0]);
  state.SetItemsProcessed(state.iterations() * g.size());
}

void BM_EnergyDiscrete(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g = make_grid(2, {n, n, 1}, {1.0, 1.0, 0.0});
  SpectralContext ctx(g);
  const KernelGrid k = sample_periodic(KernelSpec{0.1, 0.1, 2}, g, ctx);
  const Field u = make_initial_condition({"cosine_product", {}}, g, 0);
  const PotentialSpec pot = PotentialSpec::logarithmic(1.0, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(energy_discrete(u, k, pot, ctx));
  state.SetItemsProcessed(state.iterations() * g.size());
}

BENCHMARK(BM_ProxObstacle);
BENCHMARK(BM_ProxRegular);
BENCHMARK(BM_ProxLogarithmic);
BENCHMARK(BM_Convolve1d)->Arg(1024)->Arg(4096);
BENCHMARK(BM_Convolve2d)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_StepFirstOrder)->Arg(64)->Arg(128);
BENCHMARK(BM_StepImplicit)->Arg(64)->Arg(128);
BENCHMARK(BM_EnergyDiscrete)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
