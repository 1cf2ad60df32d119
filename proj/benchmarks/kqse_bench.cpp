#include <benchmark/benchmark.h>

#include <kqse/kcfe.hpp>
#include <kqse/kde.hpp>
#include <kqse/reconstruction.hpp>
#include <kqse/reference_states.hpp>
#include <kqse/sampling.hpp>
#include <kqse/special_functions.hpp>

namespace {

const kqse::ReferenceState kCat = kqse::ReferenceState::cat({1.0, 0.5});

void BM_Erfc(benchmark::State& state) {
  std::complex<double> z{0.3, 2.5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(kqse::erfc(z));
    z += std::complex<double>{1e-9, 0.0};
  }
}
BENCHMARK(BM_Erfc);

void BM_BuildSampler(benchmark::State& state) {
  const kqse::PhaseSetting s{0.8, 1.2};
  for (auto _ : state)
    benchmark::DoNotOptimize(kqse::build_sampler(kCat, s, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_BuildSampler)->Arg(2048)->Arg(8192)->Unit(benchmark::kMillisecond);

void BM_Draw(benchmark::State& state) {
  const auto sampler = kqse::build_sampler(kCat, {0.8, 1.2});
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(kqse::draw(sampler, n, seed++));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Draw)->Arg(500)->Arg(4000);

void BM_KdeEvaluate(benchmark::State& state) {
  const auto sampler = kqse::build_sampler(kCat, {0.8, 1.2});
  const auto batch = kqse::draw(sampler, static_cast<std::size_t>(state.range(0)), 3);
  const double h = kqse::silverman_bandwidth(batch);
  const kqse::UniformGrid grid{-6.0, 6.0, 512};
  for (auto _ : state)
    benchmark::DoNotOptimize(kqse::kde_evaluate(batch, kqse::KernelKind::GaussianStd, h, grid));
}
BENCHMARK(BM_KdeEvaluate)->Arg(500)->Arg(2000)->Unit(benchmark::kMicrosecond);

void BM_EmpiricalCf(benchmark::State& state) {
  const auto sampler = kqse::build_sampler(kCat, {0.8, 1.2});
  const auto batch = kqse::draw(sampler, static_cast<std::size_t>(state.range(0)), 5);
  for (auto _ : state) benchmark::DoNotOptimize(kqse::empirical_cf(batch, 1.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EmpiricalCf)->Arg(500)->Arg(4000);

void BM_ReconstructRho(benchmark::State& state) {
  kqse::ReconstructionGrid grid;
  grid.y = {-4.0, 4.0, static_cast<std::size_t>(state.range(0))};
  grid.mu_max = 8.0;
  grid.n_mu = 160;
  const auto cf = kqse::analytic_cf_grid(kCat, grid.mu_axis(), grid.nu_axis());
  for (auto _ : state) benchmark::DoNotOptimize(kqse::reconstruct_rho(cf, grid, true));
}
BENCHMARK(BM_ReconstructRho)->Arg(17)->Arg(33)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
