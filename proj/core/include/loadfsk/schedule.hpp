#pragma once

#include <string>
#include <vector>

#include "loadfsk/bits.hpp"
#include "loadfsk/modem.hpp"
#include "loadfsk/waveform.hpp"

namespace loadfsk {

/// Highest carrier the load mechanism is allowed to synthesize.
inline constexpr double kMaxCarrierHz = 60000.0;

struct LoadSegment {
    double carrier_hz = 0.0;  // 0 means idle
    double duration_s = 0.0;

    bool idle() const { return carrier_hz == 0.0; }
    double half_cycle_s() const { return idle() ? 0.0 : 1.0 / (2.0 * carrier_hz); }
    /// Number of busy/idle half-cycles in this segment (0 for idle segments).
    std::size_t half_cycles() const;
};

/// Per-core busy/idle plan: each busy segment alternates busy/idle every
/// half cycle 1/(2*f_c), starting busy, on all participating cores at once.
struct LoadSchedule {
    int cores = 1;
    std::vector<LoadSegment> segments;

    double total_duration_s() const;
    void validate() const;  // throws on carrier > 60 kHz, non-integral half-cycles
};

/// One segment per symbol at the symbol's tone; the duration is the nearest
/// positive whole number of half-cycles to T_b.
LoadSchedule build_schedule(const Bits& bits, const ModulationScheme& scheme, int cores);

/// Emission-proxy rendering: sample = (active_cores/reference_cores) during
/// busy half-cycles, 0 during idle halves and idle segments.
/// reference_cores = 0 normalizes by schedule.cores.
Waveform render_schedule(const LoadSchedule& schedule, double sample_rate,
                         int reference_cores = 0);

// Text format: "CORES <n>" header, then one "SEG <f_c_hz|idle> <duration_s>"
// line per segment.
void save_schedule(const std::string& path, const LoadSchedule& schedule);
LoadSchedule load_schedule(const std::string& path);

}  // namespace loadfsk
