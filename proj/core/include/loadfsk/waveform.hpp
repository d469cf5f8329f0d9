#pragma once

#include <cstddef>
#include <vector>

namespace loadfsk {

/// Uniformly sampled real-valued signal.
struct Waveform {
    std::vector<float> samples;
    double sample_rate = 48000.0;

    double duration_s() const {
        return static_cast<double>(samples.size()) / sample_rate;
    }
    bool empty() const { return samples.empty(); }

    void append(const Waveform& other) {
        samples.insert(samples.end(), other.samples.begin(), other.samples.end());
    }
    void append_silence(std::size_t n) { samples.insert(samples.end(), n, 0.0f); }
};

/// Mean square over the non-idle span (leading/trailing exact zeros trimmed,
/// interior zeros counted). Returns 0 for all-zero input.
inline double active_signal_power(const Waveform& w) {
    std::size_t first = 0, last = w.samples.size();
    while (first < last && w.samples[first] == 0.0f)
        ++first;
    while (last > first && w.samples[last - 1] == 0.0f)
        --last;
    if (first == last)
        return 0.0;
    double acc = 0.0;
    for (std::size_t i = first; i < last; ++i)
        acc += static_cast<double>(w.samples[i]) * static_cast<double>(w.samples[i]);
    return acc / static_cast<double>(last - first);
}

}  // namespace loadfsk
