#include "loadfsk/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "loadfsk/dsp.hpp"
#include "loadfsk/receiver.hpp"
#include "loadfsk/rng.hpp"

namespace loadfsk {

namespace {

double log2_size(std::size_t m) {
    std::size_t k = 0;
    while ((std::size_t{1} << k) < m)
        ++k;
    return static_cast<double>(k);
}

double binomial(std::size_t n, std::size_t k) {
    double acc = 1.0;
    for (std::size_t i = 1; i <= k; ++i)
        acc *= static_cast<double>(n - k + i) / static_cast<double>(i);
    return acc;
}

}  // namespace

double ber_theory(std::size_t order, double ebn0_db, BerVariant variant) {
    if (order < 2 || (order & (order - 1)) != 0)
        throw std::invalid_argument("order must be a power of two >= 2");
    const double m = static_cast<double>(order);
    const double k = log2_size(order);
    const double ebn0 = std::pow(10.0, ebn0_db / 10.0);

    double sum = 0.0;
    for (std::size_t n = 1; n <= order - 1; ++n) {
        const double dn = static_cast<double>(n);
        const double term = binomial(order - 1, n) / (dn + 1.0) *
                            std::exp(-dn * k * ebn0 / (dn + 1.0));
        sum += (n % 2 == 1) ? term : -term;
    }
    const double pref =
        (variant == BerVariant::Paper) ? 1.0 / (2.0 * (m - 1.0)) : m / (2.0 * (m - 1.0));
    return pref * sum;
}

double ber_montecarlo(const ModulationScheme& scheme, double ebn0_db, std::size_t n_bits,
                      std::uint64_t seed) {
    scheme.validate();
    if (scheme.kind == ModulationScheme::Kind::MultiCarrier)
        throw std::invalid_argument(
            "symbol-level Monte-Carlo runs on single-carrier schemes (per-subcarrier "
            "behaviour equals B-FSK)");
    if (n_bits < 1000)
        throw std::invalid_argument("need at least 1000 bits for a Monte-Carlo estimate");

    const std::size_t order = scheme.order();
    const std::size_t k = scheme.bits_per_symbol();
    const std::size_t spb = scheme.samples_per_symbol();
    const double ebn0 = std::pow(10.0, ebn0_db / 10.0);
    // E_b/N_0 of the sampled cosine against discrete AWGN of variance s^2:
    // gamma_b = A^2 * N / (4 * k * s^2).
    const double sigma = scheme.amplitude *
                         std::sqrt(static_cast<double>(spb) / (4.0 * static_cast<double>(k) * ebn0));

    const std::size_t n_syms = (n_bits + k - 1) / k;
    CounterRng bit_rng = CounterRng::substream(seed, 1);
    CounterRng noise_rng = CounterRng::substream(seed, 2);

    std::size_t errors = 0;
    std::size_t counted = 0;

    constexpr std::size_t kChunkSyms = 2048;
    std::vector<int> symbols;
    symbols.reserve(kChunkSyms);
    for (std::size_t done = 0; done < n_syms; done += symbols.size()) {
        symbols.clear();
        const std::size_t chunk = std::min(kChunkSyms, n_syms - done);
        for (std::size_t i = 0; i < chunk; ++i)
            symbols.push_back(static_cast<int>(bit_rng.next_u64() % order));

        Waveform w = modulate_symbols(symbols, scheme, WaveKind::Sine);
        for (float& v : w.samples)
            v += static_cast<float>(sigma * noise_rng.next_gaussian());

        for (std::size_t i = 0; i < chunk; ++i) {
            const auto s0 = static_cast<std::size_t>(
                std::llround(static_cast<double>(i) * scheme.bit_time * scheme.sample_rate));
            const auto s1 = static_cast<std::size_t>(
                std::llround(static_cast<double>(i + 1) * scheme.bit_time * scheme.sample_rate));
            const std::span<const float> sym(w.samples.data() + s0, s1 - s0);
            int best = 0;
            double best_e = -1.0;
            for (std::size_t m = 0; m < order; ++m) {
                const double e = goertzel_power(sym, {}, scheme.tones[m], scheme.sample_rate);
                if (e > best_e) {
                    best_e = e;
                    best = static_cast<int>(m);
                }
            }
            // Bit errors between sent and decided symbol, MSB-first natural binary.
            const auto diff = static_cast<unsigned>(symbols[i] ^ best);
            for (std::size_t b = 0; b < k && counted < n_bits; ++b, ++counted)
                errors += (diff >> (k - 1 - b)) & 1u;
        }
    }
    return static_cast<double>(errors) / static_cast<double>(n_bits);
}

BerReport run_ber_grid(const ModulationScheme& scheme, const std::vector<double>& ebn0_grid,
                       std::size_t n_bits, std::uint64_t seed, BerVariant variant) {
    BerReport report;
    switch (scheme.kind) {
        case ModulationScheme::Kind::BFSK: report.scheme = "bfsk"; break;
        case ModulationScheme::Kind::MFSK: report.scheme = "mfsk"; break;
        case ModulationScheme::Kind::MultiCarrier: report.scheme = "multicarrier"; break;
    }
    for (std::size_t i = 0; i < ebn0_grid.size(); ++i) {
        BerPoint p;
        p.ebn0_db = ebn0_grid[i];
        p.theory_pb = ber_theory(scheme.order(), p.ebn0_db, variant);
        p.seed = CounterRng::mix(seed, i);
        p.n_bits = n_bits;
        p.measured_pb = ber_montecarlo(scheme, p.ebn0_db, n_bits, p.seed);
        report.points.push_back(p);
    }
    return report;
}

void write_ber_csv(const std::string& path, const BerReport& report) {
    FILE* f = std::fopen(path.c_str(), "w");
    if (!f)
        throw std::runtime_error("cannot open for writing: " + path);
    std::fprintf(f, "ebn0_db,theory_pb,measured_pb,n_bits,seed\n");
    for (const auto& p : report.points)
        std::fprintf(f, "%.6g,%.10g,%.10g,%zu,%llu\n", p.ebn0_db, p.theory_pb, p.measured_pb,
                     p.n_bits, static_cast<unsigned long long>(p.seed));
    std::fclose(f);
}

std::size_t SweepSpec::n_steps() const {
    return static_cast<std::size_t>(std::floor((f_end_hz - f_start_hz) / step_hz + 1e-9)) + 1;
}

void SweepSpec::validate() const {
    if (!(f_start_hz < f_end_hz))
        throw std::invalid_argument("sweep needs f_start < f_end");
    if (f_end_hz > 63000.0)
        throw std::invalid_argument("sweep ceiling is 63 kHz");
    if (!(step_hz > 0.0) || !(step_duration_s > 0.0))
        throw std::invalid_argument("sweep step and duration must be positive");
}

Waveform sweep_generate(const SweepSpec& spec, double sample_rate) {
    spec.validate();
    if (spec.f_end_hz >= sample_rate / 2.0)
        throw std::invalid_argument("sweep end at or above Nyquist");

    Waveform w;
    w.sample_rate = sample_rate;
    const std::size_t steps = spec.n_steps();
    const auto total = static_cast<std::size_t>(
        std::llround(static_cast<double>(steps) * spec.step_duration_s * sample_rate));
    w.samples.resize(total);

    for (std::size_t s = 0; s < steps; ++s) {
        const double f = spec.f_start_hz + static_cast<double>(s) * spec.step_hz;
        const auto n0 = static_cast<std::size_t>(
            std::llround(static_cast<double>(s) * spec.step_duration_s * sample_rate));
        const auto n1 = static_cast<std::size_t>(
            std::llround(static_cast<double>(s + 1) * spec.step_duration_s * sample_rate));
        for (std::size_t n = n0; n < n1 && n < total; ++n) {
            const double t = static_cast<double>(n - n0) / sample_rate;
            w.samples[n] = static_cast<float>(std::cos(2.0 * std::numbers::pi * f * t));
        }
    }
    return w;
}

double transmission_time(double size_bits, double bps, Overhead overhead,
                         const FrameMode& mode, std::size_t chunk_bits) {
    if (!(bps > 0.0))
        throw std::invalid_argument("bit rate must be positive");
    if (size_bits < 0.0)
        throw std::invalid_argument("size must be non-negative");
    if (overhead == Overhead::None)
        return size_bits / bps;

    const auto size = static_cast<std::size_t>(std::llround(size_bits));
    double on_air = 0.0;
    if (mode.kind == FrameMode::Kind::Static) {
        const std::size_t frames = (size + mode.static_size - 1) / mode.static_size;
        on_air = static_cast<double>(frames) *
                 static_cast<double>(kPreambleBits + mode.static_size + kCrcBits);
    } else {
        const std::size_t chunk = std::min(chunk_bits, kMaxDynamicPayloadBits);
        const std::size_t frames = size == 0 ? 0 : (size + chunk - 1) / chunk;
        on_air = size_bits + static_cast<double>(frames) *
                                 static_cast<double>(kPreambleBits + kLengthFieldBits + kCrcBits);
    }
    return on_air / bps;
}

ModulationScheme scheme_for_rate(ModulationScheme::Kind kind, double rate_bps,
                                 double sample_rate) {
    switch (kind) {
        case ModulationScheme::Kind::BFSK: return ModulationScheme::bfsk(rate_bps, sample_rate);
        case ModulationScheme::Kind::MFSK: return ModulationScheme::mfsk4(rate_bps, sample_rate);
        case ModulationScheme::Kind::MultiCarrier:
            return ModulationScheme::multicarrier4(rate_bps, sample_rate);
    }
    throw std::logic_error("unknown scheme kind");
}

std::vector<RatePoint> run_rate_table(double snr_db, ModulationScheme::Kind kind,
                                      const std::vector<double>& rates_bps,
                                      std::size_t bits_per_rate, std::uint64_t seed) {
    std::vector<RatePoint> table;
    constexpr std::size_t kFrameBits = 1000;

    for (std::size_t r = 0; r < rates_bps.size(); ++r) {
        const double rate = rates_bps[r];
        ModulationScheme scheme = scheme_for_rate(kind, rate, 48000.0);

        // Tone spacing must be at least 2/T_b for the receiver to separate
        // the tones at this signalling rate.
        auto sorted = scheme.tones;
        std::sort(sorted.begin(), sorted.end());
        double min_spacing = sorted.back();
        for (std::size_t i = 1; i < sorted.size(); ++i)
            min_spacing = std::min(min_spacing, sorted[i] - sorted[i - 1]);
        if (min_spacing < 2.0 / scheme.bit_time)
            throw std::invalid_argument("rate/tone-spacing conflict: spacing < 2/T_b");

        CounterRng payload_rng = CounterRng::substream(seed, 100 + r);
        std::vector<Bits> payloads;
        std::size_t total = 0;
        while (total < bits_per_rate) {
            const std::size_t n = std::min(kFrameBits, bits_per_rate - total);
            Bits p(n);
            for (auto& b : p)
                b = static_cast<std::uint8_t>(payload_rng.next_u64() & 1u);
            total += n;
            payloads.push_back(std::move(p));
        }

        const FrameMode mode = FrameMode::dynamic();
        const std::size_t gap = 2 * scheme.samples_per_symbol();
        Waveform tx = modulate_payloads(payloads, mode, scheme, WaveKind::Sine, gap);
        // Quiet lead-in/out so the channel span is well defined.
        Waveform stream;
        stream.sample_rate = tx.sample_rate;
        stream.append_silence(gap);
        stream.append(tx);
        stream.append_silence(gap);
        const Waveform rx = add_awgn(stream, snr_db, CounterRng::mix(seed, r));

        std::vector<DemodFrame> frames;
        if (kind == ModulationScheme::Kind::MultiCarrier)
            frames = demodulate_multicarrier(rx, scheme, mode);
        else
            frames = demodulate_stream(rx, ReceiverConfig::for_scheme(scheme, mode));

        RatePoint point;
        point.rate_bps = rate;
        point.snr_db = snr_db;
        for (std::size_t i = 0; i < payloads.size(); ++i) {
            point.bits += payloads[i].size();
            if (i < frames.size() && frames[i].payload.size() == payloads[i].size()) {
                for (std::size_t b = 0; b < payloads[i].size(); ++b)
                    point.bit_errors += payloads[i][b] != frames[i].payload[b];
            } else {
                point.bit_errors += payloads[i].size();  // lost or resized frame
            }
        }
        point.ber = point.bits == 0
                        ? 0.0
                        : static_cast<double>(point.bit_errors) / static_cast<double>(point.bits);
        table.push_back(point);
    }
    return table;
}

void write_rate_csv(const std::string& path, const std::vector<RatePoint>& table) {
    FILE* f = std::fopen(path.c_str(), "w");
    if (!f)
        throw std::runtime_error("cannot open for writing: " + path);
    std::fprintf(f, "rate_bps,ber,bits,bit_errors,snr_db\n");
    for (const auto& p : table)
        std::fprintf(f, "%.6g,%.10g,%zu,%zu,%.3f\n", p.rate_bps, p.ber, p.bits, p.bit_errors,
                     p.snr_db);
    std::fclose(f);
}

}  // namespace loadfsk
