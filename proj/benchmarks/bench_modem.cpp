#include <benchmark/benchmark.h>

#include <random>

#include "loadfsk/crc8.hpp"
#include "loadfsk/frame.hpp"
#include "loadfsk/modem.hpp"
#include "loadfsk/schedule.hpp"

using namespace loadfsk;

namespace {
Bits random_bits(std::size_t n) {
    std::mt19937 rng(1);
    Bits b(n);
    for (auto& x : b)
        x = static_cast<std::uint8_t>(rng() & 1u);
    return b;
}
}  // namespace

static void BM_Crc8(benchmark::State& state) {
    const Bits bits = random_bits(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(crc8(bits));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Crc8)->Arg(48)->Arg(1024)->Arg(65535);

static void BM_EncodeFrame(benchmark::State& state) {
    const Bits payload = random_bits(1024);
    for (auto _ : state)
        benchmark::DoNotOptimize(encode_frame(payload, FrameMode::dynamic()));
}
BENCHMARK(BM_EncodeFrame);

static void BM_ModulateSine(benchmark::State& state) {
    const Bits bits = random_bits(static_cast<std::size_t>(state.range(0)));
    const ModulationScheme scheme = ModulationScheme::bfsk(500.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(modulate(bits, scheme));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ModulateSine)->Arg(100)->Arg(1000);

static void BM_RenderSchedule(benchmark::State& state) {
    const LoadSchedule sched =
        build_schedule(random_bits(200), ModulationScheme::bfsk(500.0), 4);
    for (auto _ : state)
        benchmark::DoNotOptimize(render_schedule(sched, 48000.0, 8));
}
BENCHMARK(BM_RenderSchedule);
