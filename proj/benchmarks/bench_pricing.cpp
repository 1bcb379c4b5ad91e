#include <benchmark/benchmark.h>

#include <filesystem>

#include "kv/harness.hpp"
#include "kv/journal.hpp"
#include "kv/lifecycle.hpp"
#include "kv/pricing.hpp"

namespace {

using namespace kv::pricing;

const std::filesystem::path kData = KV_DATA_SOURCE_DIR;

void BM_NormalCdfReference(benchmark::State& state) {
  double x = -6.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(normal_cdf_reference(x));
    x = x > 6.0 ? -6.0 : x + 1e-3;
  }
}
BENCHMARK(BM_NormalCdfReference);

void BM_NormalCdfPolynomial(benchmark::State& state) {
  double x = -6.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(normal_cdf_polynomial(x));
    x = x > 6.0 ? -6.0 : x + 1e-3;
  }
}
BENCHMARK(BM_NormalCdfPolynomial);

void BM_CallPrice(benchmark::State& state) {
  const CdfMode mode = state.range(0) == 0 ? kReference : kPolynomial;
  const PricingInputs in{"HULL", 42, 40, 0.5, 0.10, 0.20};
  for (auto _ : state) benchmark::DoNotOptimize(black_scholes_call(in, mode));
  state.SetLabel(to_string(mode));
}
BENCHMARK(BM_CallPrice)->Arg(0)->Arg(1);

void BM_DualPathSample(benchmark::State& state) {
  const auto inputs = kv::harness::random_inputs(static_cast<std::size_t>(state.range(0)), 1);
  kv::harness::DualPathOptions options;
  options.run.threads = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(kv::harness::run_dual_path_regression(inputs, 5e-3, options));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DualPathSample)->Args({10000, 1})->Args({10000, 4})->Unit(benchmark::kMillisecond);

void BM_TapeReplay(benchmark::State& state) {
  const auto tape = kv::harness::load_tape(kData / "tape_synthetic_100.csv");
  for (auto _ : state) benchmark::DoNotOptimize(kv::harness::replay_tape(tape, kReference));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tape.size()));
}
BENCHMARK(BM_TapeReplay)->Unit(benchmark::kMicrosecond);

void BM_JournalReplay(benchmark::State& state) {
  using namespace kv::lifecycle;
  auto p = Project::create("bench", "bench");
  GateCriteria c;
  for (const auto k : kAllCriteria) c.set(k, 3);
  for (int cycle = 0; cycle < state.range(0); ++cycle) {
    for (int i = 0; i < 4; ++i) p.complete_step("");
    p.decide_intra_stage_gate(std::nullopt);
    for (int gate = 1; gate <= 3; ++gate) {
      p.decide_gate(gate, Go{}, c);
      for (int i = 0; i < 4; ++i) p.complete_step("");
    }
    p.restart_cycle();
  }
  const auto text = kv::journal::serialize(p.journal());
  for (auto _ : state) benchmark::DoNotOptimize(replay_journal(kv::journal::parse(text)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.journal().size()));
}
BENCHMARK(BM_JournalReplay)->Arg(10)->Arg(100)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
