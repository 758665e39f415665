#include "maxrep/random_stream.hpp"
#include "maxrep/samplers.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

using maxrep::CovarianceSpec;
using maxrep::GaussianSampler;

void run_gaussian(benchmark::State& state, const CovarianceSpec& cov) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const GaussianSampler sampler(cov, n);
  std::vector<double> path(n);
  std::uint64_t rep = 0;
  for (auto _ : state) {
    maxrep::CounterRng rng({42, rep++, maxrep::StreamTag::base_path, 0});
    sampler.fill(path, rng);
    benchmark::DoNotOptimize(path.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_GaussianIid(benchmark::State& state) { run_gaussian(state, maxrep::IidCovariance{}); }
void BM_GaussianAr1(benchmark::State& state) { run_gaussian(state, maxrep::Ar1Covariance{0.5}); }
void BM_GaussianCirculant(benchmark::State& state) {
  run_gaussian(state, maxrep::PowerDecayCovariance{2.0, 0.5});
}
void BM_GaussianDense(benchmark::State& state) {
  // [1, -0.55] fails the circulant test but is positive definite for n <= 6.
  run_gaussian(state, maxrep::ExplicitCovariance{{1.0, -0.55}});
}

void BM_Philox(benchmark::State& state) {
  maxrep::CounterRng rng({1, 0, maxrep::StreamTag::base_path, 0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(rng());
  }
}

} // namespace

BENCHMARK(BM_Philox);
BENCHMARK(BM_GaussianIid)->Arg(2000)->Arg(5000);
BENCHMARK(BM_GaussianAr1)->Arg(2000)->Arg(5000);
BENCHMARK(BM_GaussianCirculant)->Arg(2000)->Arg(5000)->Arg(100000);
BENCHMARK(BM_GaussianDense)->Arg(6);
