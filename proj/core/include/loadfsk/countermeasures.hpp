#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "loadfsk/load_executor.hpp"
#include "loadfsk/waveform.hpp"

namespace loadfsk {

/// SNR remaining after locking the CPU to a fixed frequency, interpolated
/// over the measured anchors (1 GHz -> 15 dB ... 4.8 GHz -> 35 dB).
/// Throws std::out_of_range outside [1, 4.8] GHz.
double frequency_lock_snr(double locked_ghz);

/// Defensive jamming workload: unpinned threads alternating busy/idle with
/// periods drawn uniformly from the half-cycle range of 2-24 kHz carriers.
/// Drawn periods and measured toggles are recorded per worker.
TimingReport spawn_jammer(int threads, double duration_s, std::uint64_t seed = 0x6A616D);

inline constexpr double kJammerBandLoHz = 2000.0;
inline constexpr double kJammerBandHiHz = 24000.0;

struct MonitorAlert {
    double t0_s = 0.0;
    double t1_s = 0.0;
    std::vector<double> tones_hz;  // detected narrowband tones
    double rate_hz = 0.0;          // energy alternation rate between them
    double confidence = 0.0;       // persistence * regularity, in [0, 1]
};

struct MonitorConfig {
    std::size_t fft_window = 1024;
    std::size_t hop = 256;
    double block_s = 0.5;          // analysis block length
    double alert_threshold = 0.5;  // minimum confidence to emit an alert
    int min_flips = 4;             // minimum alternations per block
};

/// Spectral monitor for FSK-like structured emissions: flags spans where
/// two narrowband tones persist and the energy alternates between them at
/// a stable rate. Pure function of the waveform.
std::vector<MonitorAlert> monitor(const Waveform& stream, double band_lo_hz, double band_hi_hz,
                                  const MonitorConfig& cfg = {});

/// "ALERT t0=<s> t1=<s> tones=<f0,f1,..> rate=<hz> conf=<0..1>"
std::string alert_log_line(const MonitorAlert& alert);

}  // namespace loadfsk
