#include <benchmark/benchmark.h>

#include "ettrap/dynamics.hpp"
#include "ettrap/geometry.hpp"
#include "ettrap/hamiltonian.hpp"
#include "ettrap/initial_state.hpp"
#include "ettrap/nn_poly.hpp"

using namespace ettrap;

namespace {

EffectiveHamiltonian trapped_chain(int n) {
  const auto h = build_h_chain(ChainGeometry::uniform(n, 0.05), DecayModel::Cooperative);
  return with_trap(h, 2.0 * std::abs(h.matrix(0, 1).real()));
}

void BM_CouplingMatrices(benchmark::State& state) {
  const auto geom = ChainGeometry::uniform(static_cast<int>(state.range(0)), 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(build_coupling_matrices(geom, DecayModel::Cooperative));
}
BENCHMARK(BM_CouplingMatrices)->Arg(20);

void BM_PropagatePure(benchmark::State& state) {
  const auto h = trapped_chain(static_cast<int>(state.range(0)));
  const TimeGrid grid{10.0, 1000};
  for (auto _ : state) benchmark::DoNotOptimize(propagate_pure(h, InitialState::site(1), grid));
}
BENCHMARK(BM_PropagatePure)->Arg(10);

void BM_PropagateLindblad(benchmark::State& state) {
  const auto h = trapped_chain(static_cast<int>(state.range(0)));
  const TimeGrid grid{10.0, 100};
  for (auto _ : state) benchmark::DoNotOptimize(propagate_lindblad(h, 1.0, InitialState::site(1), grid));
}
BENCHMARK(BM_PropagateLindblad)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_EpLocus(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(nn_ep_locus(static_cast<int>(state.range(0)), 1.0));
}
BENCHMARK(BM_EpLocus)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
