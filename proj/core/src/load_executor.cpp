#include "loadfsk/load_executor.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <stdexcept>
#include <thread>

#if defined(__linux__)
#include <pthread.h>
#endif

namespace loadfsk {

namespace {

using Clock = std::chrono::steady_clock;

bool pin_current_thread(int core_id) {
#if defined(__linux__)
    cpu_set_t set;
    CPU_ZERO(&set);
    CPU_SET(core_id, &set);
    return pthread_setaffinity_np(pthread_self(), sizeof set, &set) == 0;
#else
    (void)core_id;
    return false;
#endif
}

// Keeps the core pipeline busy; the barrier stops the compiler from
// collapsing the loop.
inline void burn_iterations(std::uint64_t& acc, int n) {
    for (int i = 0; i < n; ++i) {
        acc = acc * 6364136223846793005ULL + 1442695040888963407ULL;
        std::atomic_signal_fence(std::memory_order_seq_cst);
    }
}

void sleep_spin_until(Clock::time_point deadline, std::chrono::nanoseconds resolution) {
    const auto coarse = deadline - resolution;
    if (Clock::now() < coarse)
        std::this_thread::sleep_until(coarse);
    while (Clock::now() < deadline) {
        // sub-resolution slice
    }
}

struct WorkerFlag {
    std::mutex m;
    bool busy = false;
};

}  // namespace

double TimingReport::median_half_cycle_error() const {
    std::vector<double> errs;
    for (std::size_t i = 1; i < toggles.size(); ++i) {
        const double intended = toggles[i].intended_s - toggles[i - 1].intended_s;
        const double measured = toggles[i].measured_s - toggles[i - 1].measured_s;
        if (intended > 0.0)
            errs.push_back(std::abs(measured - intended) / intended);
    }
    if (errs.empty())
        return 0.0;
    std::nth_element(errs.begin(), errs.begin() + static_cast<std::ptrdiff_t>(errs.size() / 2),
                     errs.end());
    return errs[errs.size() / 2];
}

double TimingReport::max_jitter_s() const {
    double worst = 0.0;
    for (const auto& t : toggles)
        worst = std::max(worst, std::abs(t.measured_s - t.intended_s));
    return worst;
}

void TimingReport::save(const std::string& path) const {
    FILE* f = std::fopen(path.c_str(), "w");
    if (!f)
        throw std::runtime_error("cannot open for writing: " + path);
    std::fprintf(f, "wall_s=%.6f\n", wall_s);
    std::fprintf(f, "toggles=%zu\n", toggles.size());
    std::fprintf(f, "workers=%zu\n", workers.size());
    std::fprintf(f, "affinity_degraded=%d\n", affinity_degraded ? 1 : 0);
    std::fprintf(f, "median_half_cycle_error=%.6f\n", median_half_cycle_error());
    std::fprintf(f, "max_jitter_s=%.9f\n", max_jitter_s());
    for (const auto& t : toggles)
        std::fprintf(f, "TOGGLE %.9f %.9f\n", t.intended_s, t.measured_s);
    std::fclose(f);
}

TimingReport execute_schedule(const LoadSchedule& schedule, double timer_resolution_s) {
    schedule.validate();
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (static_cast<unsigned>(schedule.cores) > hw)
        throw std::runtime_error("insufficient cores: schedule wants " +
                                 std::to_string(schedule.cores) + ", host has " +
                                 std::to_string(hw));

    TimingReport report;
    report.workers.resize(static_cast<std::size_t>(schedule.cores));

    std::vector<WorkerFlag> flags(static_cast<std::size_t>(schedule.cores));
    std::atomic<bool> running{true};
    std::atomic<int> pin_failures{0};

    std::vector<std::thread> workers;
    workers.reserve(flags.size());
    for (int c = 0; c < schedule.cores; ++c) {
        workers.emplace_back([c, &flags, &running, &pin_failures, &report] {
            const bool pinned = pin_current_thread(c);
            if (!pinned)
                pin_failures.fetch_add(1, std::memory_order_relaxed);
            report.workers[static_cast<std::size_t>(c)].core_id = c;
            report.workers[static_cast<std::size_t>(c)].pinned = pinned;
            std::uint64_t acc = 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(c);
            while (running.load(std::memory_order_acquire)) {
                bool busy;
                {
                    std::lock_guard<std::mutex> lock(flags[static_cast<std::size_t>(c)].m);
                    busy = flags[static_cast<std::size_t>(c)].busy;
                }
                if (busy)
                    burn_iterations(acc, 512);
                else
                    std::this_thread::yield();
            }
        });
    }

    const auto resolution =
        std::chrono::nanoseconds(static_cast<long long>(timer_resolution_s * 1e9));
    const auto t0 = Clock::now();

    auto set_all = [&flags](bool busy) {
        for (auto& f : flags) {
            std::lock_guard<std::mutex> lock(f.m);
            f.busy = busy;
        }
    };

    double seg_start_s = 0.0;
    for (const auto& seg : schedule.segments) {
        if (seg.idle()) {
            set_all(false);
            const auto deadline =
                t0 + std::chrono::duration_cast<std::chrono::nanoseconds>(
                         std::chrono::duration<double>(seg_start_s + seg.duration_s));
            sleep_spin_until(deadline, resolution);
            seg_start_s += seg.duration_s;
            continue;
        }

        const double half = seg.half_cycle_s();
        const std::size_t n_half = seg.half_cycles();
        for (std::size_t k = 0; k < n_half; ++k) {
            // Absolute grid keeps long segments drift-free.
            const double intended = seg_start_s + static_cast<double>(k) * half;
            const auto deadline = t0 + std::chrono::duration_cast<std::chrono::nanoseconds>(
                                           std::chrono::duration<double>(intended));
            sleep_spin_until(deadline, resolution);
            set_all(k % 2 == 0);  // busy first
            const double measured =
                std::chrono::duration<double>(Clock::now() - t0).count();
            report.toggles.push_back({intended, measured});
        }
        seg_start_s += seg.duration_s;
    }

    // Final boundary: return all cores to idle at the schedule end.
    const auto end_deadline = t0 + std::chrono::duration_cast<std::chrono::nanoseconds>(
                                       std::chrono::duration<double>(seg_start_s));
    sleep_spin_until(end_deadline, resolution);
    set_all(false);
    running.store(false, std::memory_order_release);
    for (auto& t : workers)
        t.join();

    report.wall_s = std::chrono::duration<double>(Clock::now() - t0).count();
    report.affinity_degraded = pin_failures.load() > 0;
    return report;
}

}  // namespace loadfsk
