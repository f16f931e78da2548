#include <benchmark/benchmark.h>

#include "essh/essh.hpp"

namespace {

const essh::HoppingParams kParams{0.0, 0.17, 0.43, 0.17, 0.37};

void BM_BuildHamiltonian(benchmark::State& state) {
  const essh::ChainSpec spec{static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(essh::build_hamiltonian(spec, kParams));
}
BENCHMARK(BM_BuildHamiltonian)->Arg(100)->Arg(400);

void BM_Diagonalize(benchmark::State& state) {
  const auto h = essh::build_hamiltonian(essh::ChainSpec{static_cast<std::size_t>(state.range(0))}, kParams);
  for (auto _ : state) benchmark::DoNotOptimize(essh::diagonalize(h));
}
BENCHMARK(BM_Diagonalize)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_WindingNumber(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(essh::winding_number(kParams, k));
}
BENCHMARK(BM_WindingNumber)->Arg(1024)->Arg(4096)->Arg(16384);

void BM_Evolve(benchmark::State& state) {
  const essh::ChainSpec spec{static_cast<std::size_t>(state.range(0))};
  const auto es0 = essh::diagonalize(essh::build_hamiltonian(spec, kParams));
  const auto psi = essh::prepare_initial_edge_state(es0, spec, essh::EdgeSide::left);
  const auto final_params = kParams.with(essh::Hopping::mu, 0.56);
  const auto es = essh::diagonalize(essh::build_hamiltonian(spec, final_params));
  const essh::QuenchSetup setup{kParams, final_params, spec, psi, essh::uniform_time_grid(200.0, 1001)};
  for (auto _ : state) benchmark::DoNotOptimize(essh::evolve(setup, es));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(setup.time_grid.size()));
}
BENCHMARK(BM_Evolve)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_SurvivalSpectral(benchmark::State& state) {
  const essh::ChainSpec spec{400};
  const auto es = essh::diagonalize(essh::build_hamiltonian(spec, kParams.with(essh::Hopping::mu, 0.56)));
  const Eigen::VectorXd a = Eigen::VectorXd::Constant(es.energies.size(), 1.0).normalized();
  const auto t = essh::uniform_time_grid(1200.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(essh::survival_probability(a, es.energies, t));
}
BENCHMARK(BM_SurvivalSpectral)->Arg(1001)->Arg(6001);

}  // namespace

BENCHMARK_MAIN();
