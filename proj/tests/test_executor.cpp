#include <stdexcept>
#include <thread>

#include "doctest.h"
#include "loadfsk/load_executor.hpp"

using namespace loadfsk;

TEST_CASE("idle-only schedule runs for the scheduled wall time with zero toggles") {
    LoadSchedule sched;
    sched.cores = 1;
    sched.segments = {{0.0, 0.2}};
    const TimingReport report = execute_schedule(sched);
    CHECK(report.toggles.empty());
    CHECK(report.wall_s == doctest::Approx(0.2).epsilon(0.25));
    CHECK(report.median_half_cycle_error() == 0.0);
}

TEST_CASE("requesting more cores than the host has fails") {
    LoadSchedule sched;
    sched.cores = static_cast<int>(std::thread::hardware_concurrency()) + 1;
    sched.segments = {{100.0, 0.01}};
    CHECK_THROWS_AS((void)execute_schedule(sched), std::runtime_error);
}

TEST_CASE("busy schedule produces one toggle per half-cycle") {
    LoadSchedule sched;
    sched.cores = 1;
    sched.segments = {{100.0, 0.1}};  // 20 half-cycles of 5 ms
    const TimingReport report = execute_schedule(sched, 200e-6);
    CHECK(report.toggles.size() == 20);
    REQUIRE(report.workers.size() == 1);
    CHECK(report.workers[0].core_id == 0);
    // Intended timestamps sit on the absolute grid.
    for (std::size_t k = 0; k < report.toggles.size(); ++k)
        CHECK(report.toggles[k].intended_s == doctest::Approx(0.005 * static_cast<double>(k)));
    // Wall time covers the schedule.
    CHECK(report.wall_s >= 0.1);
    CHECK(report.wall_s < 0.5);
}

TEST_CASE("timing report survives a save") {
    LoadSchedule sched;
    sched.cores = 1;
    sched.segments = {{200.0, 0.05}};
    const TimingReport report = execute_schedule(sched);
    report.save("timing_test.txt");
    FILE* f = std::fopen("timing_test.txt", "r");
    REQUIRE(f != nullptr);
    char line[128];
    REQUIRE(std::fgets(line, sizeof line, f));
    CHECK(std::string(line).substr(0, 7) == "wall_s=");
    std::fclose(f);
    std::remove("timing_test.txt");
}
