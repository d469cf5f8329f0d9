#include <stdexcept>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "loadfsk/modem.hpp"
#include "oracles.hpp"

using namespace loadfsk;

TEST_CASE("square partial sum: t = 0 is zero for any depth") {
    for (int n : {1, 3, 10})
        CHECK(square_partial_sum(123.0, 0.0, n) == doctest::Approx(0.0));
}

TEST_CASE("square partial sum matches term-by-term evaluation at f=1, t=0.25, N=3") {
    // (4/pi) * (1 - 1/3 + 1/5), frozen from the independent summation.
    const double expected = 1.1034742721038078;
    CHECK(square_partial_sum(1.0, 0.25, 3) == doctest::Approx(expected).epsilon(1e-12));

    double direct = 0.0;
    for (int n = 1; n <= 3; ++n)
        direct += std::sin(2.0 * std::numbers::pi * (2 * n - 1) * 0.25) / (2 * n - 1);
    direct *= 4.0 / std::numbers::pi;
    CHECK(square_partial_sum(1.0, 0.25, 3) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("partial sums approach the ideal square wave away from the edges") {
    // RMS error over a grid that excludes 5% of the period around each
    // discontinuity must fall monotonically with more terms.
    const double f = 1.0;
    auto rms_err = [&](int n_terms) {
        double acc = 0.0;
        int count = 0;
        for (int i = 0; i < 2000; ++i) {
            const double t = static_cast<double>(i) / 2000.0;
            const double frac = t * f - std::floor(t * f);
            const double dist = std::min({std::abs(frac), std::abs(frac - 0.5),
                                          std::abs(frac - 1.0)});
            if (dist < 0.05)
                continue;
            const double ideal = frac < 0.5 ? 1.0 : -1.0;
            const double err = square_partial_sum(f, t, n_terms) - ideal;
            acc += err * err;
            ++count;
        }
        return std::sqrt(acc / count);
    };
    double prev = 1e9;
    for (int n : {1, 2, 4, 8, 16, 32}) {
        const double e = rms_err(n);
        CHECK(e < prev);
        prev = e;
    }
}

TEST_CASE("bits_to_symbols: binary maps to itself") {
    const Bits b = {1, 0, 0, 1, 1};
    const auto syms = bits_to_symbols(b, 2);
    REQUIRE(syms.size() == 5);
    for (std::size_t i = 0; i < b.size(); ++i)
        CHECK(syms[i] == b[i]);
}

TEST_CASE("bits_to_symbols: M=4 MSB-first natural binary") {
    const auto syms = bits_to_symbols({1, 0, 1, 1}, 4);
    CHECK(syms == std::vector<int>{2, 3});
}

TEST_CASE("symbols_to_bits inverts bits_to_symbols for M=8") {
    std::mt19937 rng(23);
    Bits b(12);
    for (auto& x : b)
        x = static_cast<std::uint8_t>(rng() & 1u);
    CHECK(symbols_to_bits(bits_to_symbols(b, 8), 8) == b);
}

TEST_CASE("bits_to_symbols rejects non-divisible input") {
    CHECK_THROWS_AS((void)bits_to_symbols({1, 0, 1}, 4), std::invalid_argument);
}

TEST_CASE("empty bit vector modulates to an empty waveform") {
    CHECK(modulate({}, ModulationScheme::bfsk(100.0)).empty());
}

TEST_CASE("single bit occupies round(T_b*Fs) samples with the DFT peak at its tone") {
    ModulationScheme s = ModulationScheme::bfsk(100.0);
    s.tones = {5000.0, 8000.0};
    const Waveform w = modulate({1}, s);
    CHECK(w.samples.size() == 480);
    CHECK(oracle::dft_peak_freq(w.samples, 48000.0) == doctest::Approx(8000.0).epsilon(1e-6));
}

TEST_CASE("modulate duration is exact for whole-sample symbol periods") {
    ModulationScheme s = ModulationScheme::bfsk(500.0);
    Bits b(37, 1);
    CHECK(modulate(b, s).samples.size() == 37 * 96);
}

TEST_CASE("per-symbol energy is amplitude^2*T_b*Fs/2 within 1%") {
    ModulationScheme s = ModulationScheme::bfsk(100.0);
    s.amplitude = 0.7;
    const Waveform w = modulate({0}, s);  // 5 kHz, 50 cycles per symbol
    double energy = 0.0;
    for (float v : w.samples)
        energy += static_cast<double>(v) * v;
    const double expected = 0.7 * 0.7 * 480.0 / 2.0;
    CHECK(energy == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("square kind emits levels {0, amplitude} at the tone's rate") {
    ModulationScheme s = ModulationScheme::bfsk(100.0);
    s.amplitude = 0.5;
    const Waveform w = modulate({0}, s, WaveKind::Square);
    for (float v : w.samples)
        CHECK((v == 0.0f || v == 0.5f));
    // Fundamental of a 0/A square sits at the tone.
    double best = 0.0, best_f = 0.0;
    for (double f = 1000.0; f <= 20000.0; f += 500.0) {
        const double p = oracle::dft_power(w.samples, f, 48000.0);
        if (p > best) {
            best = p;
            best_f = f;
        }
    }
    CHECK(best_f == doctest::Approx(5000.0));
}

TEST_CASE("modulate rejects tones above Nyquist") {
    ModulationScheme s = ModulationScheme::bfsk(100.0);
    s.tones = {5000.0, 30000.0};
    CHECK_THROWS_AS((void)modulate({1, 0}, s), std::invalid_argument);
}

TEST_CASE("one subcarrier is plain BFSK up to normalization") {
    const Bits b = {1, 0, 1, 1, 0};
    ModulationScheme ref = ModulationScheme::bfsk(100.0);
    const Waveform direct = modulate(b, ref);
    const Waveform mc = multicarrier_modulate({b}, {{5000.0, 8500.0}}, 0.01, 48000.0);
    REQUIRE(mc.samples.size() == direct.samples.size());
    for (std::size_t i = 0; i < mc.samples.size(); i += 37)
        CHECK(mc.samples[i] == doctest::Approx(direct.samples[i]).epsilon(1e-4));
}

TEST_CASE("two subcarriers with identical streams put equal energy on both pairs") {
    const Bits b = {1, 1, 1, 1, 1, 1, 1, 1};
    const std::vector<SubcarrierPair> pairs = {{5000.0, 5500.0}, {7000.0, 7500.0}};
    const Waveform w = multicarrier_modulate({b, b}, pairs, 0.01, 48000.0);
    const double e1 = oracle::dft_power(w.samples, 5500.0, 48000.0);
    const double e2 = oracle::dft_power(w.samples, 7500.0, 48000.0);
    CHECK(e1 == doctest::Approx(e2).epsilon(0.01));
    float peak = 0.0f;
    for (float v : w.samples)
        peak = std::max(peak, std::abs(v));
    CHECK(peak <= 1.0f);
}

TEST_CASE("overlapping subcarrier pairs are rejected") {
    const std::vector<SubcarrierPair> pairs = {{5000.0, 6000.0}, {5500.0, 7000.0}};
    CHECK_THROWS_AS((void)multicarrier_modulate({{1}, {0}}, pairs, 0.01, 48000.0),
                    std::invalid_argument);
}

TEST_CASE("frame packing keeps the preamble on the extreme tones for M-FSK") {
    Bits frame = {1, 0, 1, 0, 1, 0, 1, 0, /*body*/ 1, 1, 0, 1};
    const auto syms = frame_to_symbols(frame, 4);
    REQUIRE(syms.size() == 8 + 2);
    for (std::size_t i = 0; i < 8; ++i)
        CHECK(syms[i] == (i % 2 == 0 ? 3 : 0));
    CHECK(syms[8] == 3);  // bits 11
    CHECK(syms[9] == 1);  // bits 01
}

TEST_CASE("frame packing pads the tail to a whole symbol") {
    Bits frame = {1, 0, 1, 0, 1, 0, 1, 0, /*body*/ 1, 1, 1};
    const auto syms = frame_to_symbols(frame, 4);
    REQUIRE(syms.size() == 10);
    CHECK(syms[9] == 2);  // bits 1 + pad 0
}
