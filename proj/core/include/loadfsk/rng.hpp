#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace loadfsk {

// Counter-based generator: the k-th output is a pure function of (seed, k),
// so identical (input, seed) pairs give bit-identical noise on every run and
// substreams can be derived without coordination.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    /// Independent substream for (seed, stream_id).
    static CounterRng substream(std::uint64_t seed, std::uint64_t stream_id) {
        return CounterRng(mix(seed, 0x9E3779B97F4A7C15ULL * (stream_id + 1)));
    }

    std::uint64_t next_u64() { return mix(seed_, counter_++); }

    /// Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; generates pairs internally.
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_double();
        const double u2 = next_double();
        if (u1 <= 0.0)
            u1 = 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    static std::uint64_t mix(std::uint64_t seed, std::uint64_t counter) {
        // SplitMix64 finalizer applied to the (seed, counter) pair.
        std::uint64_t z = seed + counter * 0x9E3779B97F4A7C15ULL + 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace loadfsk
