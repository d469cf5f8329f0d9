// Acceptance suite: one check per release criterion, one PASS/FAIL line
// each, nonzero exit if any hard criterion fails. Criterion 10 (live load
// timing) is environment-dependent and reports without gating.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "loadfsk/channel.hpp"
#include "loadfsk/countermeasures.hpp"
#include "loadfsk/crc8.hpp"
#include "loadfsk/dsp.hpp"
#include "loadfsk/evaluation.hpp"
#include "loadfsk/frame.hpp"
#include "loadfsk/load_executor.hpp"
#include "loadfsk/modem.hpp"
#include "loadfsk/receiver.hpp"
#include "loadfsk/rng.hpp"
#include "loadfsk/schedule.hpp"

using namespace loadfsk;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail, bool soft = false) {
    const char* tag = soft ? (pass ? "PASS (soft)" : "SOFT-FAIL (non-gating)")
                           : (pass ? "PASS" : "FAIL");
    std::printf("[%2d] %-22s %s\n", criterion, tag, detail.c_str());
    std::fflush(stdout);
    if (!pass && !soft)
        ++g_failures;
}

Bits random_bits(std::size_t n, std::uint64_t seed) {
    CounterRng rng(seed);
    Bits b(n);
    for (auto& x : b)
        x = static_cast<std::uint8_t>(rng.next_u64() & 1u);
    return b;
}

char buf[512];

// ---------------------------------------------------------------- criterion 1
void criterion_transmission_times() {
    struct Row {
        double bits, bps, want;
    };
    const Row rows[] = {
        {4096, 5, 819.2}, {80, 50, 1.6}, {256, 1000, 0.256}, {80000, 1000, 80.0}};
    bool pass = true;
    for (const auto& r : rows)
        pass = pass && (transmission_time(r.bits, r.bps) == r.want);
    report(1, pass, "transmission-time rows exact: 819.2 s / 1.6 s / 0.256 s / 80 s");
}

// ---------------------------------------------------------------- criterion 2
void criterion_loopback() {
    // Payload sizes sampled from [0, 65535], 10^4 payload bits per
    // (scheme, rate), byte-exact after a 30 dB AWGN channel.
    const std::vector<std::size_t> sizes = {0, 1, 8, 13, 32, 100, 257, 1024, 3000, 5565};
    const struct {
        ModulationScheme::Kind kind;
        const char* name;
    } schemes[] = {{ModulationScheme::Kind::BFSK, "bfsk"},
                   {ModulationScheme::Kind::MFSK, "4fsk"},
                   {ModulationScheme::Kind::MultiCarrier, "4sub"}};

    bool pass = true;
    std::string detail;
    for (const auto& sch : schemes) {
        for (double rate : {100.0, 500.0}) {
            const ModulationScheme scheme = scheme_for_rate(sch.kind, rate);
            const FrameMode mode = FrameMode::dynamic();

            std::vector<Bits> payloads;
            std::size_t total = 0;
            for (std::size_t i = 0; i < sizes.size(); ++i) {
                payloads.push_back(random_bits(sizes[i], 2000 + i));
                total += sizes[i];
            }

            const std::size_t gap = scheme.samples_per_symbol();
            Waveform w;
            w.sample_rate = scheme.sample_rate;
            w.append_silence(4 * gap);
            w.append(modulate_payloads(payloads, mode, scheme, WaveKind::Sine, gap));
            w.append_silence(2 * gap);
            w = add_awgn(w, 30.0, 0xC0FFEE + static_cast<std::uint64_t>(rate));

            std::vector<DemodFrame> frames;
            if (sch.kind == ModulationScheme::Kind::MultiCarrier)
                frames = demodulate_multicarrier(w, scheme, mode);
            else
                frames = demodulate_stream(w, ReceiverConfig::for_scheme(scheme, mode));

            std::size_t errors = total;  // until proven decoded
            if (frames.size() == payloads.size()) {
                errors = 0;
                for (std::size_t i = 0; i < payloads.size(); ++i) {
                    if (frames[i].status != FrameStatus::Ok ||
                        frames[i].payload != payloads[i]) {
                        errors += std::max<std::size_t>(1, payloads[i].size());
                    }
                }
            }
            if (errors != 0) {
                pass = false;
                std::snprintf(buf, sizeof buf, " [%s@%gbps: %zu errored bits]", sch.name, rate,
                              errors);
                detail += buf;
            }
        }
    }
    std::snprintf(buf, sizeof buf,
                  "loopback byte-exact at 30 dB, 10^4 payload bits per scheme/rate%s",
                  detail.empty() ? " (0 errors)" : detail.c_str());
    report(2, pass, buf);
}

// ---------------------------------------------------------------- criterion 3
void criterion_ber_theory() {
    // Orthogonal tone pair so the matched detector meets the Eq-4
    // assumptions; the Monte-Carlo oracle selected the standard prefactor
    // variant (see the evaluation unit tests). The paper's physical BER
    // tables are hardware measurements and are not reproduced here.
    ModulationScheme s = ModulationScheme::bfsk(1000.0);
    s.tones = {5000.0, 8000.0};
    const std::size_t n_bits = 100000;

    bool pass = true;
    std::string detail = "BFSK Monte-Carlo vs theory:";
    for (double db : {0.0, 4.0, 8.0, 12.0}) {
        const double theory = ber_theory(2, db, BerVariant::Standard);
        const double measured =
            ber_montecarlo(s, db, n_bits, 0xBE12 + static_cast<std::uint64_t>(db));
        const double se = std::sqrt(theory * (1.0 - theory) / static_cast<double>(n_bits));
        const bool ok = std::abs(measured - theory) <= 3.0 * se;
        pass = pass && ok;
        std::snprintf(buf, sizeof buf, " %gdB %.2e/%.2e%s", db, measured, theory,
                      ok ? "" : "(!)");
        detail += buf;
    }
    report(3, pass, detail);
}

// ---------------------------------------------------------------- criterion 4
void criterion_rate_table() {
    const std::size_t bits = 10000;
    const auto clean =
        run_rate_table(50.0, ModulationScheme::Kind::BFSK, {100.0, 200.0, 500.0}, bits, 0xAB1E);
    bool pass = true;
    for (const auto& p : clean)
        pass = pass && p.bit_errors == 0;

    // Reduced-SNR error onset at 1000 bps: nonzero BER of the same order
    // as the reported 0.8%-1.78% band (accepted range (0, 5%]).
    const auto onset =
        run_rate_table(-3.0, ModulationScheme::Kind::BFSK, {1000.0}, bits, 0xAB1F);
    const double ber = onset[0].ber;
    pass = pass && ber > 0.0 && ber <= 0.05;

    std::snprintf(buf, sizeof buf,
                  "rates <=500 bps at 50 dB: 0 errors over 10^4 bits; 1000 bps at -3 dB: "
                  "BER %.3g in (0, 0.05]",
                  ber);
    report(4, pass, buf);
}

// ---------------------------------------------------------------- criterion 5
void criterion_square_spectrum() {
    LoadSchedule sched;
    sched.cores = 1;
    sched.segments = {{1000.0, 0.1}};
    const Waveform w = render_schedule(sched, 192000.0);

    auto amplitude_at = [&](double f) {
        double re = 0.0, im = 0.0;
        for (std::size_t n = 0; n < w.samples.size(); ++n) {
            const double ang = -2.0 * 3.14159265358979323846 * f * static_cast<double>(n) /
                               192000.0;
            re += static_cast<double>(w.samples[n]) * std::cos(ang);
            im += static_cast<double>(w.samples[n]) * std::sin(ang);
        }
        return 2.0 * std::sqrt(re * re + im * im) / static_cast<double>(w.samples.size());
    };

    bool pass = true;
    double worst = 0.0;
    for (int n = 1; n <= 5; ++n) {
        const double k = 2.0 * n - 1.0;
        const double expected = 4.0 / (3.14159265358979323846 * k) * 0.5;  // 0..1 levels
        const double got = amplitude_at(1000.0 * k);
        const double rel = std::abs(got - expected) / expected;
        worst = std::max(worst, rel);
        pass = pass && rel <= 0.02;
    }
    std::snprintf(buf, sizeof buf,
                  "first 5 odd harmonics follow 4/(pi(2n-1)) law, worst error %.2f%%",
                  worst * 100.0);
    report(5, pass, buf);
}

// ---------------------------------------------------------------- criterion 6
void criterion_preamble_detection() {
    const ModulationScheme scheme = ModulationScheme::bfsk(500.0);
    const FrameMode mode = FrameMode::dynamic();
    const ReceiverConfig cfg = ReceiverConfig::for_scheme(scheme, mode);
    const double fs = scheme.sample_rate;
    const std::size_t spb = scheme.samples_per_symbol();
    const int trials = 1000;

    // Detection at 20 dB with offset error <= T_b/2.
    int detected = 0;
    for (int t = 0; t < trials; ++t) {
        CounterRng rng(5000 + static_cast<std::uint64_t>(t));
        const auto lead = static_cast<std::size_t>((0.2 + 0.6 * rng.next_double()) * fs);
        Waveform w;
        w.sample_rate = fs;
        w.append_silence(lead);
        w.append(modulate_frame(encode_frame(random_bits(64, 6000 + t), mode), scheme));
        w.append_silence(spb * 4);
        w = add_awgn(w, 20.0, 7000 + static_cast<std::uint64_t>(t));

        const auto det = detect_preamble(w, cfg);
        if (det && std::abs(static_cast<double>(det->offset) - static_cast<double>(lead)) <=
                       static_cast<double>(spb) / 2.0)
            ++detected;
    }

    // False alarms over 1000 seeded 60 s noise windows.
    int false_alarms = 0;
    const auto noise_len = static_cast<std::size_t>(60.0 * fs);
    std::vector<std::thread> pool;
    std::vector<int> fa_parts(4, 0);
    for (int part = 0; part < 4; ++part) {
        pool.emplace_back([&, part] {
            for (int t = part; t < trials; t += 4) {
                Waveform noise;
                noise.sample_rate = fs;
                noise.samples.resize(noise_len);
                CounterRng rng(9000 + static_cast<std::uint64_t>(t));
                for (auto& v : noise.samples)
                    v = static_cast<float>(rng.next_gaussian());
                if (detect_preamble(noise, cfg))
                    ++fa_parts[static_cast<std::size_t>(part)];
            }
        });
    }
    for (auto& th : pool)
        th.join();
    for (int part : fa_parts)
        false_alarms += part;

    const bool pass = detected >= 990 && false_alarms <= 10;
    std::snprintf(buf, sizeof buf,
                  "preamble: %d/%d detected within T_b/2 at 20 dB, %d/%d false alarms per "
                  "60 s noise window",
                  detected, trials, false_alarms, trials);
    report(6, pass, buf);
}

// ---------------------------------------------------------------- criterion 7
void criterion_crc() {
    // CRC-8 linearity (syndrome depends only on the error pattern) plus an
    // exhaustive sweep over all single-bit and <= 8-bit burst patterns on
    // 48-bit static frames, across random payloads.
    const FrameMode mode = FrameMode::fixed(32);
    bool pass = true;
    std::size_t patterns = 0;

    for (std::uint64_t seed = 0; seed < 64 && pass; ++seed) {
        const Bits payload = random_bits(32, 7700 + seed);
        const Bits frame = encode_frame(payload, mode);
        for (std::size_t start = kPreambleBits; start < 48 && pass; ++start) {
            for (std::size_t len = 1; len <= 8 && start + len <= 48 && pass; ++len) {
                const std::size_t interiors = len >= 2 ? (std::size_t{1} << (len - 2)) : 1;
                for (std::size_t pat = 0; pat < interiors; ++pat) {
                    Bits corrupted = frame;
                    corrupted[start] ^= 1;
                    if (len >= 2)
                        corrupted[start + len - 1] ^= 1;
                    for (std::size_t j = 0; j + 2 < len; ++j)
                        if ((pat >> j) & 1u)
                            corrupted[start + 1 + j] ^= 1;
                    if (decode_frame(corrupted, mode).status != FrameStatus::CrcMismatch) {
                        pass = false;
                        break;
                    }
                    ++patterns;
                }
            }
        }
    }
    std::snprintf(buf, sizeof buf,
                  "CRC-8 detected 100%% of %zu single-bit/burst(<=8) patterns on 48-bit frames",
                  patterns);
    report(7, pass, buf);
}

// ---------------------------------------------------------------- criterion 8
void criterion_jamming_monotonic() {
    const ModulationScheme scheme = ModulationScheme::bfsk(500.0);
    const FrameMode mode = FrameMode::dynamic();

    auto ber_at = [&](int jammers, std::uint64_t seed) {
        std::vector<Bits> payloads;
        for (int i = 0; i < 8; ++i)
            payloads.push_back(random_bits(500, seed * 31 + static_cast<std::uint64_t>(i)));
        Waveform w;
        w.sample_rate = scheme.sample_rate;
        w.append_silence(2000);
        w.append(modulate_payloads(payloads, mode, scheme, WaveKind::Sine, 960));
        w.append_silence(2000);
        w = add_awgn(w, 20.0, seed);
        w = apply_jamming(w, jammers, 2000.0, 24000.0, seed + 1, 0.12);
        const auto frames = demodulate_stream(w, ReceiverConfig::for_scheme(scheme, mode));
        std::size_t errors = 0, bits = 0;
        for (std::size_t i = 0; i < payloads.size(); ++i) {
            bits += payloads[i].size();
            if (i < frames.size() && frames[i].payload.size() == payloads[i].size()) {
                for (std::size_t b = 0; b < payloads[i].size(); ++b)
                    errors += payloads[i][b] != frames[i].payload[b];
            } else {
                errors += payloads[i].size();
            }
        }
        return static_cast<double>(errors) / static_cast<double>(bits);
    };

    std::string detail = "BER by jammer count:";
    bool pass = true;
    double prev = -1.0;
    for (int jammers : {0, 16, 32, 48}) {
        double ber = 0.0;
        for (std::uint64_t seed : {11u, 12u, 13u})  // fixed seed family
            ber += ber_at(jammers, seed);
        ber /= 3.0;
        std::snprintf(buf, sizeof buf, " %d->%.4f", jammers, ber);
        detail += buf;
        if (ber + 1e-12 < prev)
            pass = false;
        prev = ber;
    }
    report(8, pass, detail + " (non-decreasing)");
}

// ---------------------------------------------------------------- criterion 9
void criterion_sweep() {
    SweepSpec spec;
    spec.f_start_hz = 2000.0;
    spec.f_end_hz = 63000.0;
    spec.step_hz = 100.0;
    spec.step_duration_s = 0.1;
    const double fs = 192000.0;
    const Waveform w = sweep_generate(spec, fs);

    const std::size_t window = 4096;
    const auto spd = static_cast<std::size_t>(spec.step_duration_s * fs);
    const double bin_hz = fs / static_cast<double>(window);
    bool pass = w.samples.size() == static_cast<std::size_t>(611 * 19200);
    std::size_t worst_step = 0;
    double worst = 0.0;
    std::vector<std::complex<double>> buf_fft(window);
    const auto win = hann_window(window);
    for (std::size_t s = 0; s < spec.n_steps(); ++s) {
        const double f_true = spec.f_start_hz + static_cast<double>(s) * spec.step_hz;
        const std::size_t center = s * spd + spd / 2 - window / 2;
        for (std::size_t i = 0; i < window; ++i)
            buf_fft[i] = {static_cast<double>(w.samples[center + i]) *
                              static_cast<double>(win[i]),
                          0.0};
        fft_inplace(buf_fft);
        std::size_t peak = 0;
        double best = -1.0;
        for (std::size_t k = 1; k < window / 2; ++k) {
            if (std::norm(buf_fft[k]) > best) {
                best = std::norm(buf_fft[k]);
                peak = k;
            }
        }
        const double err = std::abs(static_cast<double>(peak) - f_true / bin_hz);
        if (err > worst) {
            worst = err;
            worst_step = s;
        }
        if (err > 1.0)
            pass = false;
    }
    std::snprintf(buf, sizeof buf,
                  "sweep ridge within one 46.9 Hz bin at all 611 steps (worst %.2f bins at "
                  "step %zu)",
                  worst, worst_step);
    report(9, pass, buf);
}

// --------------------------------------------------------------- criterion 10
void criterion_load_timing() {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const int cores = static_cast<int>(std::min(hw, 4u));
    LoadSchedule sched;
    sched.cores = cores;
    sched.segments = {{500.0, 1.0}};
    try {
        const TimingReport rep = execute_schedule(sched, 100e-6);
        const double median_err = rep.median_half_cycle_error();
        std::snprintf(buf, sizeof buf,
                      "load timing (%d core%s, f_c=500 Hz, 1 s): %zu toggles, median "
                      "half-cycle error %.1f%%, max jitter %.0f us%s%s",
                      cores, cores == 1 ? "" : "s", rep.toggles.size(), median_err * 100.0,
                      rep.max_jitter_s() * 1e6,
                      rep.affinity_degraded ? ", affinity degraded" : "",
                      hw < 4 ? " [host below the 4-core reference]" : "");
        report(10, median_err <= 0.10, buf, /*soft=*/true);
    } catch (const std::exception& e) {
        std::snprintf(buf, sizeof buf, "load timing skipped: %s", e.what());
        report(10, false, buf, /*soft=*/true);
    }
}

}  // namespace

int main() {
    std::printf("loadfsk acceptance suite\n");
    criterion_transmission_times();
    criterion_loopback();
    criterion_ber_theory();
    criterion_rate_table();
    criterion_square_spectrum();
    criterion_preamble_detection();
    criterion_crc();
    criterion_jamming_monotonic();
    criterion_sweep();
    criterion_load_timing();
    std::printf("%d hard failure(s)\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
