#include <benchmark/benchmark.h>

#include "loadfsk/channel.hpp"
#include "loadfsk/evaluation.hpp"
#include "loadfsk/modem.hpp"

using namespace loadfsk;

static void BM_AddAwgn(benchmark::State& state) {
    const Waveform w = modulate(Bits(100, 1), ModulationScheme::bfsk(100.0));
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(add_awgn(w, 20.0, ++seed));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.samples.size()));
}
BENCHMARK(BM_AddAwgn);

static void BM_ApplyJamming(benchmark::State& state) {
    const Waveform w = modulate(Bits(50, 1), ModulationScheme::bfsk(100.0));
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            apply_jamming(w, static_cast<int>(state.range(0)), 2000.0, 24000.0, ++seed));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.samples.size()));
}
BENCHMARK(BM_ApplyJamming)->Arg(4)->Arg(16);

static void BM_BerMonteCarlo(benchmark::State& state) {
    ModulationScheme s = ModulationScheme::bfsk(1000.0);
    s.tones = {5000.0, 8000.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(ber_montecarlo(s, 8.0, 10000, 7));
    state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_BerMonteCarlo);

BENCHMARK_MAIN();
