#pragma once

#include <string>
#include <vector>

#include "loadfsk/schedule.hpp"

namespace loadfsk {

struct ToggleRecord {
    double intended_s = 0.0;  // on the absolute grid t0 + k/(2*f_c)
    double measured_s = 0.0;
};

struct WorkerTiming {
    int core_id = -1;  // requested logical core, -1 if unpinned
    bool pinned = false;
    std::vector<ToggleRecord> toggles;    // per-thread toggles (jammer workers)
    std::vector<double> periods_drawn_s;  // randomized periods (jammer workers)
};

struct TimingReport {
    std::vector<ToggleRecord> toggles;  // the governor's shared toggle timeline
    std::vector<WorkerTiming> workers;
    bool affinity_degraded = false;  // pinning unavailable; ran unpinned
    double wall_s = 0.0;

    /// Median |measured - intended| / half_cycle over consecutive toggles.
    double median_half_cycle_error() const;
    /// Max |measured - intended| over all toggles, seconds.
    double max_jitter_s() const;

    void save(const std::string& path) const;
};

/// Run a schedule on real threads: one governor plus schedule.cores workers,
/// each pinned to a distinct logical core (unpinned with a report flag where
/// affinity is unsupported). Workers spin on integer arithmetic while their
/// flag is busy and yield while idle; the governor flips the flags on the
/// absolute half-cycle grid, sleeping to within `timer_resolution_s` of each
/// boundary and busy-waiting the remainder.
/// Throws std::runtime_error if the host has fewer logical cores than
/// schedule.cores.
TimingReport execute_schedule(const LoadSchedule& schedule, double timer_resolution_s = 100e-6);

}  // namespace loadfsk
