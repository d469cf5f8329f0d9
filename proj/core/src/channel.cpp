#include "loadfsk/channel.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <memory>
#include <stdexcept>

#include "loadfsk/dsp.hpp"
#include "loadfsk/rng.hpp"

namespace loadfsk {

void ChannelProfile::validate() const {
    if (anchors.empty())
        throw std::invalid_argument("profile has no anchors");
    for (std::size_t i = 1; i < anchors.size(); ++i)
        if (anchors[i].first <= anchors[i - 1].first)
            throw std::invalid_argument("profile anchors must be strictly increasing in distance");
    if (wall_offset_db < 0.0)
        throw std::invalid_argument("wall offset must be non-negative");
}

ChannelProfile load_profile(const std::string& path) {
    FILE* f = std::fopen(path.c_str(), "r");
    if (!f)
        throw std::runtime_error("cannot open profile: " + path);
    std::unique_ptr<FILE, int (*)(FILE*)> guard(f, std::fclose);

    ChannelProfile p;
    char line[256];
    while (std::fgets(line, sizeof line, f)) {
        if (std::strncmp(line, "NAME", 4) == 0) {
            char name[128] = {0};
            if (std::sscanf(line, "NAME %127s", name) == 1)
                p.name = name;
        } else if (std::strncmp(line, "WALL", 4) == 0) {
            if (std::sscanf(line, "WALL %lf", &p.wall_offset_db) != 1)
                throw std::runtime_error("malformed WALL line: " + path);
        } else if (std::strncmp(line, "ANCHOR", 6) == 0) {
            double d = 0.0, s = 0.0;
            if (std::sscanf(line, "ANCHOR %lf %lf", &d, &s) != 2)
                throw std::runtime_error("malformed ANCHOR line: " + path);
            p.anchors.emplace_back(d, s);
        }
    }
    p.validate();
    return p;
}

void save_profile(const std::string& path, const ChannelProfile& profile) {
    profile.validate();
    FILE* f = std::fopen(path.c_str(), "w");
    if (!f)
        throw std::runtime_error("cannot open for writing: " + path);
    std::fprintf(f, "NAME %s\n", profile.name.c_str());
    std::fprintf(f, "WALL %.3f\n", profile.wall_offset_db);
    for (const auto& [d, s] : profile.anchors)
        std::fprintf(f, "ANCHOR %.3f %.3f\n", d, s);
    std::fclose(f);
}

double snr_at_distance(const ChannelProfile& profile, double distance_m) {
    profile.validate();
    const double base = interp_linear(profile.anchors, distance_m);
    return profile.wall ? base - profile.wall_offset_db : base;
}

double awgn_sigma(const Waveform& w, double snr_db) {
    const double p = active_signal_power(w);
    if (p <= 0.0)
        throw std::invalid_argument("add_awgn: signal power undefined for all-zero input");
    const double noise_power = p / std::pow(10.0, snr_db / 10.0);
    return std::sqrt(noise_power);
}

Waveform add_awgn(const Waveform& w, double snr_db, std::uint64_t seed) {
    if (w.empty())
        throw std::invalid_argument("add_awgn: empty waveform");
    if (std::isinf(snr_db) && snr_db > 0.0)
        return w;
    const double sigma = awgn_sigma(w, snr_db);

    CounterRng rng(seed);
    Waveform out = w;
    for (float& v : out.samples)
        v += static_cast<float>(sigma * rng.next_gaussian());
    return out;
}

Waveform apply_jamming(const Waveform& w, int jammers, double band_lo_hz, double band_hi_hz,
                       std::uint64_t seed, double jammer_amplitude) {
    if (jammers < 0)
        throw std::invalid_argument("jammer count must be >= 0");
    if (jammers == 0)
        return w;
    if (!(0.0 < band_lo_hz && band_lo_hz < band_hi_hz && band_hi_hz <= w.sample_rate / 2.0))
        throw std::invalid_argument("jamming band must satisfy 0 < lo < hi <= Nyquist");

    const double fs = w.sample_rate;
    // The FIR edge must sit strictly below Nyquist even when the band ends there.
    const double band_top = std::min(band_hi_hz, 0.495 * fs);
    std::vector<float> interference(w.samples.size(), 0.0f);

    for (int j = 0; j < jammers; ++j) {
        CounterRng rng = CounterRng::substream(seed, static_cast<std::uint64_t>(j));
        std::size_t n = 0;
        while (n < interference.size()) {
            // One hop: a random in-band square-wave burst of 5-20 ms.
            const double hop_s = 0.005 + 0.015 * rng.next_double();
            const double freq = band_lo_hz + (band_hi_hz - band_lo_hz) * rng.next_double();
            const double phase_cycles = rng.next_double();
            const auto hop_samples = static_cast<std::size_t>(std::llround(hop_s * fs));
            const std::size_t end = std::min(interference.size(), n + hop_samples);
            for (std::size_t i = n; i < end; ++i) {
                double cycles = freq * static_cast<double>(i - n) / fs + phase_cycles;
                cycles -= std::floor(cycles);
                if (cycles < 0.5)
                    interference[i] += static_cast<float>(jammer_amplitude);
            }
            n = end;
        }
    }

    // Confine the interference (square harmonics included) to the band.
    const double transition = std::max(200.0, 0.05 * (band_top - band_lo_hz));
    auto taps_n = static_cast<std::size_t>(std::ceil(3.3 * fs / transition));
    taps_n = std::min<std::size_t>(1001, taps_n) | 1u;
    const auto bp = design_bandpass(band_lo_hz, band_top, fs, taps_n);
    const auto filtered = fir_filter_same(interference, bp);

    Waveform out = w;
    for (std::size_t i = 0; i < out.samples.size(); ++i)
        out.samples[i] += filtered[i];
    return out;
}

Waveform apply_vm_dropouts(const Waveform& w, const VmDropoutParams& params,
                           std::uint64_t seed) {
    if (params.count_per_frame < 1 || params.count_per_frame > 2)
        throw std::invalid_argument("dropout count per frame must be 1 or 2");
    if (params.depth_db != 0.0 && (params.depth_db < 2.0 || params.depth_db > 8.0))
        throw std::invalid_argument("dropout depth must be 0 or within [2, 8] dB");
    if (!(params.duration_s > 0.0) || !(params.frame_duration_s > 0.0))
        throw std::invalid_argument("dropout durations must be positive");
    if (params.duration_s >= params.frame_duration_s)
        throw std::invalid_argument("dropout must be shorter than the frame span");
    if (params.depth_db == 0.0)
        return w;

    const double fs = w.sample_rate;
    const auto span = static_cast<std::size_t>(std::llround(params.frame_duration_s * fs));
    const auto hole = static_cast<std::size_t>(std::llround(params.duration_s * fs));
    const auto gain = static_cast<float>(std::pow(10.0, -params.depth_db / 20.0));

    CounterRng rng(seed);
    Waveform out = w;
    for (std::size_t base = 0; base < out.samples.size(); base += span) {
        const std::size_t span_len = std::min(span, out.samples.size() - base);
        if (span_len <= hole)
            continue;
        for (int k = 0; k < params.count_per_frame; ++k) {
            const auto start =
                base + static_cast<std::size_t>(rng.next_double() *
                                                static_cast<double>(span_len - hole));
            for (std::size_t i = start; i < start + hole && i < out.samples.size(); ++i)
                out.samples[i] *= gain;
        }
    }
    return out;
}

}  // namespace loadfsk
