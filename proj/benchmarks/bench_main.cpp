// Micro-benchmarks for the hot paths: the bosonic two-rail unitary on
// growing sparse supports, measurement conditioning, and whole-scheme runs.

#include <benchmark/benchmark.h>

#include <random>

#include "lofock/analysis.hpp"
#include "lofock/schemes.hpp"

using namespace lofock;

namespace {

PureFockState random_state(const FockLayout& layout, int terms, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> count(0, layout.cutoff());
  PureFockState::AmplitudeMap amps;
  std::vector<int> counts(static_cast<std::size_t>(layout.rail_count()));
  while (amps.size() < static_cast<std::size_t>(terms)) {
    for (auto& c : counts) c = count(rng);
    amps[layout.pack(counts)] += cx{normal(rng), normal(rng)};
  }
  return PureFockState::from_map(layout, std::move(amps)).normalized();
}

void BM_TwoRailUnitary(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const FockLayout layout(12, 2);
  const auto psi = random_state(layout, static_cast<int>(state.range(0)), rng);
  const auto h = matrix_of(hadamard(0)).matrix;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        apply_two_rail_unitary(psi, rail(2, Pol::H), rail(2, Pol::V), h));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TwoRailUnitary)->Arg(64)->Arg(512)->Arg(4096);

void BM_RailSwap(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const FockLayout layout(12, 2);
  const auto psi = random_state(layout, static_cast<int>(state.range(0)), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_rail_swap(psi, rail(1, Pol::H), rail(4, Pol::H)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RailSwap)->Arg(512)->Arg(4096);

void BM_MeasureFourRails(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const FockLayout layout(12, 2);
  const auto ens = StateEnsemble::pure(random_state(layout, 2048, rng));
  ClickPattern pattern{{{rail(0, Pol::H), 1},
                        {rail(0, Pol::V), 0},
                        {rail(1, Pol::H), 1},
                        {rail(1, Pol::V), 0}}};
  const DetectorParams params{0.7, 100.0, 10e-9};
  for (auto _ : state) {
    benchmark::DoNotOptimize(measure(ens, pattern, params));
  }
}
BENCHMARK(BM_MeasureFourRails);

void BM_SchemeRun(benchmark::State& state, const char* name, bool spdc) {
  const CircuitProgram& program = builtin_scheme(name);
  SourceSettings settings;
  settings.input = TwoQubitAmplitudes{0.5, 0.5, 0.5, 0.5};
  settings.spdc_ancillae = spdc;
  settings.spdc_input = spdc;
  settings.spdc.gamma = std::sqrt(1e-4);
  const auto inputs = bind_sources(program, settings);
  RunOptions options;
  options.detectors.shared = DetectorParams{0.7, 100.0, 10e-9};
  options.enumerate_rejected = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(program, inputs, options));
  }
}
BENCHMARK_CAPTURE(BM_SchemeRun, cs_ideal, "scheme2-cs", false);
BENCHMARK_CAPTURE(BM_SchemeRun, cs_spdc, "scheme2-cs", true);
BENCHMARK_CAPTURE(BM_SchemeRun, cnot_ghz_ideal, "scheme1-cnot", false);

void BM_MultigateClassification(benchmark::State& state) {
  const TwoQubitAmplitudes alphas{0.5, 0.5, 0.5, 0.5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        classify_branches_scheme_ii(scheme_ii_multigate_state(alphas)));
  }
}
BENCHMARK(BM_MultigateClassification);

}  // namespace

BENCHMARK_MAIN();
