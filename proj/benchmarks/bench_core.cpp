#include <benchmark/benchmark.h>

#include "spinmono/engine.hpp"
#include "spinmono/exact.hpp"
#include "spinmono/rates.hpp"

using namespace spinmono;

namespace {

const RateSpec& contact21() {
  static const RateSpec spec = build_model("contact", {{"lambda", 2.0}, {"delta", 1.0}});
  return spec;
}

void BM_SampleEvents(benchmark::State& state) {
  const auto plan = plan_window(contact21(), 1.0, 0, 4, 1e-3);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto events = sample_events(contact21(), plan, 1.0, seed++);
    benchmark::DoNotOptimize(events.events.data());
  }
}
BENCHMARK(BM_SampleEvents);

void BM_EvolveUniformized(benchmark::State& state) {
  const auto plan = plan_window(contact21(), 1.0, 0, 4, 1e-3);
  const auto init = make_initial(InitialCondition::step(), plan.window);
  const auto events = sample_events(contact21(), plan, 1.0, 3);
  for (auto _ : state) {
    auto out = evolve_uniformized(contact21(), init, events);
    benchmark::DoNotOptimize(out);
  }
  state.counters["events"] = static_cast<double>(events.events.size());
}
BENCHMARK(BM_EvolveUniformized);

void BM_Gillespie(benchmark::State& state) {
  const auto plan = plan_window(contact21(), 1.0, 0, 4, 1e-3);
  const auto init = make_initial(InitialCondition::step(), plan.window);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto out = simulate_gillespie(contact21(), init, 1.0, seed++);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_Gillespie);

void BM_TransientDistribution(benchmark::State& state) {
  const auto sites = static_cast<Site>(state.range(0));
  const Window w{-sites / 2, sites - sites / 2 - 1};
  const auto gen = build_generator(contact21(), w, 1, 0);
  const auto init = gen.encode(make_initial(InitialCondition::step(), w));
  for (auto _ : state) {
    auto p = transient_distribution(gen, init, 0.5, 1e-12);
    benchmark::DoNotOptimize(p.data());
  }
}
BENCHMARK(BM_TransientDistribution)->Arg(8)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_EnumerateUpsets(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto u = enumerate_upsets(m);
    benchmark::DoNotOptimize(u.data());
  }
}
BENCHMARK(BM_EnumerateUpsets)->DenseRange(2, 5)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
