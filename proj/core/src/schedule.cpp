#include "loadfsk/schedule.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <stdexcept>

namespace loadfsk {

std::size_t LoadSegment::half_cycles() const {
    if (idle())
        return 0;
    return static_cast<std::size_t>(std::llround(duration_s * 2.0 * carrier_hz));
}

double LoadSchedule::total_duration_s() const {
    double total = 0.0;
    for (const auto& seg : segments)
        total += seg.duration_s;
    return total;
}

void LoadSchedule::validate() const {
    if (cores < 1)
        throw std::invalid_argument("schedule needs at least one core");
    for (const auto& seg : segments) {
        if (!(seg.duration_s > 0.0))
            throw std::invalid_argument("segment duration must be positive");
        if (seg.idle())
            continue;
        if (seg.carrier_hz < 0.0 || seg.carrier_hz > kMaxCarrierHz)
            throw std::invalid_argument("carrier above the 60 kHz emission ceiling");
        const double n = seg.duration_s * 2.0 * seg.carrier_hz;
        if (std::abs(n - std::round(n)) > 1e-6 || std::llround(n) < 1)
            throw std::invalid_argument("segment duration must be a whole number of half-cycles");
    }
}

LoadSchedule build_schedule(const Bits& bits, const ModulationScheme& scheme, int cores) {
    if (cores < 1)
        throw std::invalid_argument("build_schedule: cores must be >= 1");
    scheme.validate();
    for (double f : scheme.tones)
        if (f > kMaxCarrierHz)
            throw std::invalid_argument("tone above the 60 kHz emission ceiling");

    LoadSchedule sched;
    sched.cores = cores;
    if (bits.empty())
        return sched;

    const auto symbols = bits_to_symbols(bits, scheme.order());
    for (int sym : symbols) {
        const double f = scheme.tones[static_cast<std::size_t>(sym)];
        const auto n_half = std::max<long long>(1, std::llround(scheme.bit_time * 2.0 * f));
        sched.segments.push_back({f, static_cast<double>(n_half) / (2.0 * f)});
    }
    return sched;
}

Waveform render_schedule(const LoadSchedule& schedule, double sample_rate,
                         int reference_cores) {
    schedule.validate();
    const int ref = reference_cores > 0 ? reference_cores : schedule.cores;
    if (schedule.cores > ref)
        throw std::invalid_argument("reference core count below schedule cores");
    for (const auto& seg : schedule.segments)
        if (!seg.idle() && seg.carrier_hz >= sample_rate / 2.0)
            throw std::invalid_argument("carrier at or above Nyquist for this sample rate");

    const float level = static_cast<float>(schedule.cores) / static_cast<float>(ref);

    Waveform w;
    w.sample_rate = sample_rate;
    w.samples.reserve(static_cast<std::size_t>(schedule.total_duration_s() * sample_rate) + 1);

    double seg_start_s = 0.0;
    std::size_t emitted = 0;
    for (const auto& seg : schedule.segments) {
        const double seg_end_s = seg_start_s + seg.duration_s;
        const auto end_idx = static_cast<std::size_t>(std::llround(seg_end_s * sample_rate));
        for (std::size_t n = emitted; n < end_idx; ++n) {
            const double t = static_cast<double>(n) / sample_rate - seg_start_s;
            float v = 0.0f;
            if (!seg.idle()) {
                const auto half_idx =
                    static_cast<long long>(std::floor(t * 2.0 * seg.carrier_hz));
                v = (half_idx % 2 == 0) ? level : 0.0f;  // busy first
            }
            w.samples.push_back(v);
        }
        emitted = end_idx;
        seg_start_s = seg_end_s;
    }
    return w;
}

void save_schedule(const std::string& path, const LoadSchedule& schedule) {
    FILE* f = std::fopen(path.c_str(), "w");
    if (!f)
        throw std::runtime_error("cannot open for writing: " + path);
    std::fprintf(f, "CORES %d\n", schedule.cores);
    for (const auto& seg : schedule.segments) {
        if (seg.idle())
            std::fprintf(f, "SEG idle %.9f\n", seg.duration_s);
        else
            std::fprintf(f, "SEG %.6f %.9f\n", seg.carrier_hz, seg.duration_s);
    }
    std::fclose(f);
}

LoadSchedule load_schedule(const std::string& path) {
    FILE* f = std::fopen(path.c_str(), "r");
    if (!f)
        throw std::runtime_error("cannot open for reading: " + path);
    std::unique_ptr<FILE, int (*)(FILE*)> guard(f, std::fclose);

    LoadSchedule sched;
    char line[256];
    bool have_header = false;
    while (std::fgets(line, sizeof line, f)) {
        if (std::strncmp(line, "CORES", 5) == 0) {
            if (std::sscanf(line, "CORES %d", &sched.cores) != 1)
                throw std::runtime_error("malformed CORES line: " + path);
            have_header = true;
        } else if (std::strncmp(line, "SEG", 3) == 0) {
            char freq_str[64];
            double dur = 0.0;
            if (std::sscanf(line, "SEG %63s %lf", freq_str, &dur) != 2)
                throw std::runtime_error("malformed SEG line: " + path);
            LoadSegment seg;
            seg.duration_s = dur;
            seg.carrier_hz = (std::strcmp(freq_str, "idle") == 0) ? 0.0 : std::atof(freq_str);
            sched.segments.push_back(seg);
        }
    }
    if (!have_header)
        throw std::runtime_error("missing CORES header: " + path);
    return sched;
}

}  // namespace loadfsk
