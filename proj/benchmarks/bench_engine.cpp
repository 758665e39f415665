#include "maxrep/engine.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_ReplicateGaussianReplacing(benchmark::State& state) {
  const maxrep::Simulator sim(maxrep::GaussianProcess{}, {maxrep::PointMassLaw{0.5}, maxrep::ConditionallyIid{}},
                              maxrep::PerturbationMode::replacing, static_cast<std::size_t>(state.range(0)), 7);
  std::uint64_t rep = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sim.replicate(rep++));
  }
}

void BM_ReplicateChiD3(benchmark::State& state) {
  const maxrep::Simulator sim(maxrep::ChiProcess{3, {}}, {maxrep::PointMassLaw{0.5}, maxrep::ConditionallyIid{}},
                              maxrep::PerturbationMode::replacing, static_cast<std::size_t>(state.range(0)), 7);
  std::uint64_t rep = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sim.replicate(rep++));
  }
}

} // namespace

BENCHMARK(BM_ReplicateGaussianReplacing)->Arg(2000);
BENCHMARK(BM_ReplicateChiD3)->Arg(5000);
