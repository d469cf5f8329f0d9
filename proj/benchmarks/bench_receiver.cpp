#include <benchmark/benchmark.h>

#include <random>

#include "loadfsk/channel.hpp"
#include "loadfsk/receiver.hpp"

using namespace loadfsk;

namespace {

Waveform demo_stream(std::size_t payload_bits) {
    std::mt19937 rng(2);
    Bits payload(payload_bits);
    for (auto& b : payload)
        b = static_cast<std::uint8_t>(rng() & 1u);
    const ModulationScheme scheme = ModulationScheme::bfsk(500.0);
    Waveform w;
    w.sample_rate = scheme.sample_rate;
    w.append_silence(24000);
    w.append(modulate_frame(encode_frame(payload, FrameMode::dynamic()), scheme));
    w.append_silence(4000);
    return add_awgn(w, 25.0, 3);
}

}  // namespace

static void BM_ToneEnergies(benchmark::State& state) {
    const Waveform w = demo_stream(256);
    const std::vector<double> tones = {5000.0, 8500.0};
    const std::span<const float> window(w.samples.data(), 1024);
    for (auto _ : state)
        benchmark::DoNotOptimize(tone_energies(window, tones, 48000.0));
}
BENCHMARK(BM_ToneEnergies);

static void BM_DetectPreamble(benchmark::State& state) {
    const Waveform w = demo_stream(64);
    const auto cfg =
        ReceiverConfig::for_scheme(ModulationScheme::bfsk(500.0), FrameMode::dynamic());
    for (auto _ : state)
        benchmark::DoNotOptimize(detect_preamble(w, cfg));
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(w.samples.size()));
}
BENCHMARK(BM_DetectPreamble);

static void BM_DemodulateStream(benchmark::State& state) {
    const Waveform w = demo_stream(static_cast<std::size_t>(state.range(0)));
    const auto cfg =
        ReceiverConfig::for_scheme(ModulationScheme::bfsk(500.0), FrameMode::dynamic());
    for (auto _ : state)
        benchmark::DoNotOptimize(demodulate_stream(w, cfg));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DemodulateStream)->Arg(256)->Arg(2048);
