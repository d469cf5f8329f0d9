#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "loadfsk/waveform.hpp"

namespace loadfsk {

struct ChannelProfile {
    std::string name;
    // (distance_m, snr_db) anchors, strictly increasing in distance.
    std::vector<std::pair<double, double>> anchors;
    bool wall = false;            // select the behind-wall variant
    double wall_offset_db = 8.0;  // extra attenuation applied when wall is set
    int jammers = 0;

    void validate() const;
};

// Profile files are line oriented:
//   NAME <label>
//   WALL <offset_db>          (optional)
//   ANCHOR <distance_m> <snr_db>
ChannelProfile load_profile(const std::string& path);
void save_profile(const std::string& path, const ChannelProfile& profile);

/// Piecewise-linear SNR lookup; throws std::out_of_range outside the anchor
/// span. Subtracts the wall offset when the profile's wall flag is set.
double snr_at_distance(const ChannelProfile& profile, double distance_m);

/// Additive white Gaussian noise at the requested in-band SNR, measured
/// against the mean-square power of the waveform's non-idle span. The seed
/// makes the output bit-identical across runs. snr_db = +infinity is the
/// identity. Throws on empty or all-zero input.
Waveform add_awgn(const Waveform& w, double snr_db, std::uint64_t seed);

/// Noise sigma used by add_awgn for the given waveform and SNR.
double awgn_sigma(const Waveform& w, double snr_db);

/// Adds `jammers` independent frequency-hopping square-wave interferers,
/// each confined to [band_lo, band_hi] by a band-pass filter (the raw square
/// harmonics would alias outside the band). jammers = 0 is the identity.
Waveform apply_jamming(const Waveform& w, int jammers, double band_lo_hz, double band_hi_hz,
                       std::uint64_t seed, double jammer_amplitude = 0.05);

struct VmDropoutParams {
    int count_per_frame = 1;       // 1..2 interruptions per frame span
    double depth_db = 4.0;         // 0 = identity; otherwise within [2, 8]
    double duration_s = 0.01;      // length of each interruption
    double frame_duration_s = 0.5; // span within which interruptions are placed
};

/// Attenuates count_per_frame randomly placed windows per frame-duration
/// span by depth_db. Rejects counts outside 1..2 and depths outside
/// {0} union [2, 8].
Waveform apply_vm_dropouts(const Waveform& w, const VmDropoutParams& params,
                           std::uint64_t seed);

}  // namespace loadfsk
