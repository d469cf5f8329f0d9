#include <stdexcept>
#include <cmath>
#include <cstdio>

#include "doctest.h"
#include "loadfsk/evaluation.hpp"
#include "loadfsk/dsp.hpp"
#include "oracles.hpp"

using namespace loadfsk;

TEST_CASE("standard-variant BFSK theory equals the closed form to machine precision") {
    for (double db : {-3.0, 0.0, 4.0, 8.0, 12.0}) {
        const double ebn0 = std::pow(10.0, db / 10.0);
        CHECK(ber_theory(2, db, BerVariant::Standard) ==
              doctest::Approx(0.5 * std::exp(-ebn0 / 2.0)).epsilon(1e-14));
    }
}

TEST_CASE("paper and standard variants differ exactly by the factor M") {
    for (std::size_t m : {2u, 4u, 8u, 16u})
        for (double db : {0.0, 6.0}) {
            CHECK(ber_theory(m, db, BerVariant::Standard) ==
                  doctest::Approx(static_cast<double>(m) * ber_theory(m, db, BerVariant::Paper))
                      .epsilon(1e-12));
        }
}

TEST_CASE("bit error probability vanishes at high Eb/N0") {
    CHECK(ber_theory(2, 60.0, BerVariant::Standard) < 1e-100);
    CHECK(ber_theory(4, 60.0, BerVariant::Standard) < 1e-100);
}

TEST_CASE("4-FSK outperforms BFSK beyond 6 dB on the theory curves") {
    for (double db : {6.0, 8.0, 10.0, 12.0})
        CHECK(ber_theory(4, db, BerVariant::Standard) <= ber_theory(2, db, BerVariant::Standard));
}

TEST_CASE("Monte-Carlo arbitrates the Eq-4 prefactor: the standard variant wins") {
    // Orthogonal tone pair (multiples of 1/T_b) so the matched detector
    // meets the theory assumptions exactly.
    ModulationScheme s = ModulationScheme::bfsk(1000.0);
    s.tones = {5000.0, 8000.0};
    const double measured = ber_montecarlo(s, 0.0, 100000, 4242);
    const double standard = ber_theory(2, 0.0, BerVariant::Standard);  // 0.3033
    const double paper = ber_theory(2, 0.0, BerVariant::Paper);        // 0.1517
    CHECK(std::abs(measured - standard) < std::abs(measured - paper));
    // Within 3 binomial standard errors of the standard curve.
    const double se = std::sqrt(standard * (1.0 - standard) / 100000.0);
    CHECK(std::abs(measured - standard) <= 3.0 * se);
}

TEST_CASE("Monte-Carlo matches the standard curve at 10 dB") {
    ModulationScheme s = ModulationScheme::bfsk(1000.0);
    s.tones = {5000.0, 8000.0};
    const double p = ber_theory(2, 10.0, BerVariant::Standard);
    const double measured = ber_montecarlo(s, 10.0, 200000, 7);
    const double se = std::sqrt(p * (1.0 - p) / 200000.0);
    CHECK(std::abs(measured - p) <= 3.0 * se);
}

TEST_CASE("Monte-Carlo is deterministic per seed") {
    ModulationScheme s = ModulationScheme::bfsk(1000.0);
    s.tones = {5000.0, 8000.0};
    CHECK(ber_montecarlo(s, 4.0, 10000, 99) == ber_montecarlo(s, 4.0, 10000, 99));
}

TEST_CASE("infinite SNR gives zero measured BER") {
    ModulationScheme s = ModulationScheme::bfsk(1000.0);
    s.tones = {5000.0, 8000.0};
    CHECK(ber_montecarlo(s, 200.0, 5000, 1) == 0.0);
}

TEST_CASE("ber csv has the documented schema") {
    ModulationScheme s = ModulationScheme::bfsk(1000.0);
    s.tones = {5000.0, 8000.0};
    const BerReport report = run_ber_grid(s, {8.0}, 2000, 5);
    write_ber_csv("ber_test.csv", report);
    FILE* f = std::fopen("ber_test.csv", "r");
    REQUIRE(f != nullptr);
    char line[128];
    REQUIRE(std::fgets(line, sizeof line, f));
    CHECK(std::string(line) == "ebn0_db,theory_pb,measured_pb,n_bits,seed\n");
    std::fclose(f);
    std::remove("ber_test.csv");
}

TEST_CASE("sweep spec arithmetic: 2-63 kHz at 100 Hz is 611 steps") {
    SweepSpec spec;
    spec.f_start_hz = 2000.0;
    spec.f_end_hz = 63000.0;
    spec.step_hz = 100.0;
    CHECK(spec.n_steps() == 611);
}

TEST_CASE("single-step sweep is a plain tone") {
    SweepSpec spec;
    spec.f_start_hz = 5000.0;
    spec.f_end_hz = 5050.0;
    spec.step_hz = 100.0;
    spec.step_duration_s = 0.05;
    const Waveform w = sweep_generate(spec, 48000.0);
    CHECK(w.samples.size() == 2400);
    CHECK(oracle::dft_peak_freq(w.samples, 48000.0) == doctest::Approx(5000.0).epsilon(0.01));
}

TEST_CASE("sweep validates its bounds") {
    SweepSpec spec;
    spec.f_start_hz = 2000.0;
    spec.f_end_hz = 64000.0;  // above the 63 kHz ceiling
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.f_end_hz = 40000.0;
    CHECK_THROWS_AS((void)sweep_generate(spec, 48000.0), std::invalid_argument);  // Nyquist
}

TEST_CASE("sweep staircase ridge lands in the programmed bin at every step") {
    SweepSpec spec;
    spec.f_start_hz = 2000.0;
    spec.f_end_hz = 8000.0;
    spec.step_hz = 200.0;
    spec.step_duration_s = 0.03;
    const double fs = 48000.0;
    const Waveform w = sweep_generate(spec, fs);
    const std::size_t window = 1024;
    const auto spd = static_cast<std::size_t>(spec.step_duration_s * fs);
    for (std::size_t s = 0; s < spec.n_steps(); ++s) {
        const double f_true = 2000.0 + static_cast<double>(s) * 200.0;
        const std::size_t center = s * spd + spd / 2 - window / 2;
        const auto e = spectrogram(
            std::span<const float>(w.samples.data() + center, window), fs, window, window);
        const auto& row = e.power[0];
        const auto peak =
            static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
        CHECK(std::abs(static_cast<double>(peak) - f_true / e.bin_hz()) <= 1.0);
    }
}

TEST_CASE("transmission_time reproduces every reported timing row exactly") {
    struct Row {
        double bits, bps, seconds;
    };
    const Row rows[] = {
        {80, 5, 16.0},        {80, 50, 1.6},      {80, 100, 0.8},     {80, 1000, 0.08},
        {20000, 5, 4000.0},   {20000, 50, 400.0}, {20000, 100, 200.0}, {20000, 1000, 20.0},
        {256, 5, 51.2},       {256, 50, 5.12},    {256, 100, 2.56},   {256, 1000, 0.256},
        {4096, 5, 819.2},     {4096, 50, 81.92},  {4096, 100, 40.96}, {4096, 1000, 4.096},
        {80000, 5, 16000.0},  {80000, 50, 1600.0}, {80000, 100, 800.0}, {80000, 1000, 80.0},
        {300, 5, 60.0},       {300, 50, 6.0},     {300, 100, 3.0},    {300, 1000, 0.3},
    };
    for (const auto& row : rows)
        CHECK(transmission_time(row.bits, row.bps) == row.seconds);
}

TEST_CASE("framed accounting adds the per-frame overhead") {
    // Static 32-bit payloads: 48 bits on air per 32 payload bits.
    CHECK(transmission_time(64, 100, Overhead::Framed, FrameMode::fixed(32)) ==
          doctest::Approx(0.96));
    // Dynamic, single frame: payload + 32 overhead bits.
    CHECK(transmission_time(100, 100, Overhead::Framed, FrameMode::dynamic()) ==
          doctest::Approx(1.32));
    // Dynamic, chunked into 2 frames.
    CHECK(transmission_time(100, 100, Overhead::Framed, FrameMode::dynamic(), 50) ==
          doctest::Approx(1.64));
}

TEST_CASE("rate table: clean channel gives zero BER, spacing conflicts are rejected") {
    const auto table =
        run_rate_table(50.0, ModulationScheme::Kind::BFSK, {100.0, 500.0}, 600, 21);
    REQUIRE(table.size() == 2);
    for (const auto& point : table) {
        CHECK(point.bits == 600);
        CHECK(point.bit_errors == 0);
        CHECK(point.ber == 0.0);
    }
    CHECK_THROWS_AS(
        (void)run_rate_table(50.0, ModulationScheme::Kind::BFSK, {2000.0}, 100, 21),
        std::invalid_argument);
}
