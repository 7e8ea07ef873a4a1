#include <benchmark/benchmark.h>

#include "fpt/kernels.hpp"

namespace {

using namespace fpt;

struct Setup {
  ReferenceOrbit orbit;
  StmHistory history;
  LinearBvp bvp;
  ReachableSet set;
  std::vector<Vec6> samples;

  static ReferenceOrbit halo() {
    ReferenceOrbit o;
    o.name = "earth-moon-l2-halo";
    o.params.mu_star = 0.01215059;
    o.initial_state << 1.06315768, 0.000326952322, -0.200259761, 0.000361619362, -0.176727245,
        -0.000739327422;
    o.period = 2.085034838884136;
    return o;
  }

  Setup()
      : orbit(halo()),
        history(build_stm_history(make_cr3bp_model(orbit.params), orbit, 2000, IntegratorConfig{})),
        bvp(history),
        set(reachable_set(assemble_e_star(bvp.e_form()), 3.5e-4)),
        samples(sample_boundary(set, 10000, 1)) {}
};

const Setup& setup() {
  static const Setup s;
  return s;
}

std::span<const Vec6> first(std::size_t n) { return {setup().samples.data(), n}; }

void BM_PropagateSamples(benchmark::State& state) {
  const auto s = first(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::propagate_samples(setup().bvp, s, 20));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_PropagateSamplesSerial(benchmark::State& state) {
  const auto s = first(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::propagate_samples_serial(setup().bvp, s, 20));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Envelope(benchmark::State& state) {
  const auto s = first(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::position_envelope(setup().bvp, s));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EnvelopeSerial(benchmark::State& state) {
  const auto s = first(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::position_envelope_serial(setup().bvp, s));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SampleCosts(benchmark::State& state) {
  const auto s = first(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::sample_costs(setup().set.form, s));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SampleCostsSerial(benchmark::State& state) {
  const auto s = first(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::sample_costs_serial(setup().set.form, s));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_PropagateSamples)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PropagateSamplesSerial)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Envelope)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnvelopeSerial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampleCosts)->Arg(10000);
BENCHMARK(BM_SampleCostsSerial)->Arg(10000);

BENCHMARK_MAIN();
