#include "loadfsk/countermeasures.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "loadfsk/dsp.hpp"
#include "loadfsk/rng.hpp"

namespace loadfsk {

double frequency_lock_snr(double locked_ghz) {
    static const std::vector<std::pair<double, double>> anchors = {
        {1.0, 15.0}, {2.0, 22.0}, {3.0, 28.0}, {4.0, 30.0}, {4.8, 35.0}};
    if (locked_ghz < anchors.front().first || locked_ghz > anchors.back().first)
        throw std::out_of_range("locked frequency outside [1, 4.8] GHz");
    return interp_linear(anchors, locked_ghz);
}

TimingReport spawn_jammer(int threads, double duration_s, std::uint64_t seed) {
    if (threads < 1)
        throw std::invalid_argument("jammer needs at least one thread");
    if (!(duration_s > 0.0))
        throw std::invalid_argument("jammer duration must be positive");

    using Clock = std::chrono::steady_clock;
    const double period_lo = 1.0 / (2.0 * kJammerBandHiHz);
    const double period_hi = 1.0 / (2.0 * kJammerBandLoHz);

    TimingReport report;
    report.workers.resize(static_cast<std::size_t>(threads));

    const auto t0 = Clock::now();
    const auto deadline = t0 + std::chrono::duration_cast<Clock::duration>(
                                   std::chrono::duration<double>(duration_s));

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([w, seed, period_lo, period_hi, t0, deadline, &report] {
            auto& record = report.workers[static_cast<std::size_t>(w)];
            record.core_id = -1;  // intentionally unpinned
            CounterRng rng = CounterRng::substream(seed, static_cast<std::uint64_t>(w));
            std::uint64_t acc = 0x2545F4914F6CDD1DULL + static_cast<std::uint64_t>(w);
            bool busy = true;
            auto next = Clock::now();
            while (next < deadline) {
                const double period = period_lo + (period_hi - period_lo) * rng.next_double();
                record.periods_drawn_s.push_back(period);
                const double intended =
                    std::chrono::duration<double>(next - t0).count();
                record.toggles.push_back(
                    {intended, std::chrono::duration<double>(Clock::now() - t0).count()});
                next += std::chrono::duration_cast<Clock::duration>(
                    std::chrono::duration<double>(period));
                if (busy) {
                    while (Clock::now() < next && Clock::now() < deadline) {
                        acc = acc * 6364136223846793005ULL + 1442695040888963407ULL;
                        std::atomic_signal_fence(std::memory_order_seq_cst);
                    }
                } else {
                    std::this_thread::sleep_until(std::min(next, deadline));
                }
                busy = !busy;
            }
        });
    }
    for (auto& t : pool)
        t.join();
    report.wall_s = std::chrono::duration<double>(Clock::now() - t0).count();
    return report;
}

namespace {

struct BlockVerdict {
    bool alert = false;
    double tone0_hz = 0.0;
    double tone1_hz = 0.0;
    double rate_hz = 0.0;
    double confidence = 0.0;
};

BlockVerdict analyze_block(const std::vector<std::vector<double>>& rows, std::size_t k_lo,
                           double bin_hz, double hop_s, const MonitorConfig& cfg) {
    BlockVerdict verdict;
    if (rows.size() < 8)
        return verdict;
    const std::size_t n_bins = rows.front().size();

    std::vector<double> mean(n_bins, 0.0);
    double total = 0.0;
    for (const auto& row : rows)
        for (std::size_t b = 0; b < n_bins; ++b) {
            mean[b] += row[b];
            total += row[b];
        }
    if (total <= 0.0)
        return verdict;  // silence
    for (auto& v : mean)
        v /= static_cast<double>(rows.size());

    // Two strongest well-separated narrowband peaks.
    const auto b1 = static_cast<std::size_t>(
        std::max_element(mean.begin(), mean.end()) - mean.begin());
    double best2 = -1.0;
    std::size_t b2 = n_bins;
    for (std::size_t b = 0; b < n_bins; ++b) {
        if (b + 3 >= b1 && b <= b1 + 3)
            continue;
        if (mean[b] > best2) {
            best2 = mean[b];
            b2 = b;
        }
    }
    if (b2 == n_bins)
        return verdict;

    // Tone persistence: how often the per-hop peak sits on one of the pair.
    std::size_t persistent = 0;
    for (const auto& row : rows) {
        const auto arg = static_cast<std::size_t>(
            std::max_element(row.begin(), row.end()) - row.begin());
        if ((arg + 1 >= b1 && arg <= b1 + 1) || (arg + 1 >= b2 && arg <= b2 + 1))
            ++persistent;
    }
    const double persistence = static_cast<double>(persistent) / static_cast<double>(rows.size());

    // Energy alternation between the two tones at a stable rate.
    auto band_power = [&rows](std::size_t center, std::size_t t) {
        double p = 0.0;
        const auto& row = rows[t];
        for (std::size_t b = center > 0 ? center - 1 : 0;
             b <= std::min(center + 1, row.size() - 1); ++b)
            p += row[b];
        return p;
    };
    std::vector<double> flips;
    bool prev = band_power(b1, 0) >= band_power(b2, 0);
    for (std::size_t t = 1; t < rows.size(); ++t) {
        const bool cur = band_power(b1, t) >= band_power(b2, t);
        if (cur != prev)
            flips.push_back(static_cast<double>(t));
        prev = cur;
    }
    if (flips.size() < static_cast<std::size_t>(cfg.min_flips))
        return verdict;

    std::vector<double> gaps;
    for (std::size_t i = 1; i < flips.size(); ++i)
        gaps.push_back(flips[i] - flips[i - 1]);
    auto sorted = gaps;
    std::nth_element(sorted.begin(),
                     sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2),
                     sorted.end());
    const double base = std::max(1.0, sorted[sorted.size() / 2]);

    // Intervals should cluster near integer multiples of the base period.
    std::size_t regular = 0;
    for (double g : gaps) {
        const double m = std::max(1.0, std::round(g / base));
        if (std::abs(g - m * base) <= 0.25 * base + 1.0)
            ++regular;
    }
    const double regularity = static_cast<double>(regular) / static_cast<double>(gaps.size());

    verdict.confidence = persistence * regularity;
    if (verdict.confidence >= cfg.alert_threshold) {
        verdict.alert = true;
        verdict.tone0_hz = static_cast<double>(k_lo + std::min(b1, b2)) * bin_hz;
        verdict.tone1_hz = static_cast<double>(k_lo + std::max(b1, b2)) * bin_hz;
        verdict.rate_hz = 1.0 / (2.0 * base * hop_s);
    }
    return verdict;
}

}  // namespace

std::vector<MonitorAlert> monitor(const Waveform& stream, double band_lo_hz, double band_hi_hz,
                                  const MonitorConfig& cfg) {
    if (!(0.0 < band_lo_hz && band_lo_hz < band_hi_hz && band_hi_hz <= stream.sample_rate / 2.0))
        throw std::invalid_argument("monitor band must satisfy 0 < lo < hi <= Nyquist");

    const double fs = stream.sample_rate;
    const double bin_hz = fs / static_cast<double>(cfg.fft_window);
    const auto k_lo = static_cast<std::size_t>(std::ceil(band_lo_hz / bin_hz));
    const auto k_hi = static_cast<std::size_t>(std::floor(band_hi_hz / bin_hz));
    if (k_hi <= k_lo + 4)
        throw std::invalid_argument("monitor band too narrow for the analysis window");

    const double hop_s = static_cast<double>(cfg.hop) / fs;
    const auto hops_per_block =
        std::max<std::size_t>(8, static_cast<std::size_t>(cfg.block_s / hop_s));
    const auto block_samples = (hops_per_block - 1) * cfg.hop + cfg.fft_window;

    std::vector<MonitorAlert> alerts;
    const auto win = hann_window(cfg.fft_window);
    std::vector<std::complex<double>> fft_buf(cfg.fft_window);

    bool open = false;
    MonitorAlert current;
    std::vector<double> tone0s, tone1s, rates;

    for (std::size_t block_start = 0; block_start + block_samples <= stream.samples.size();
         block_start += hops_per_block * cfg.hop) {
        // Band-restricted power rows for this block.
        std::vector<std::vector<double>> rows;
        rows.reserve(hops_per_block);
        for (std::size_t h = 0; h < hops_per_block; ++h) {
            const std::size_t s0 = block_start + h * cfg.hop;
            for (std::size_t i = 0; i < cfg.fft_window; ++i)
                fft_buf[i] = {static_cast<double>(stream.samples[s0 + i]) *
                                  static_cast<double>(win[i]),
                              0.0};
            fft_inplace(fft_buf);
            std::vector<double> row(k_hi - k_lo + 1);
            for (std::size_t b = k_lo; b <= k_hi; ++b)
                row[b - k_lo] = std::norm(fft_buf[b]);
            rows.push_back(std::move(row));
        }

        const auto verdict = analyze_block(rows, k_lo, bin_hz, hop_s, cfg);
        const double t0 = static_cast<double>(block_start) / fs;
        const double t1 = static_cast<double>(block_start + block_samples) / fs;

        if (verdict.alert) {
            if (!open) {
                open = true;
                current = MonitorAlert{};
                current.t0_s = t0;
                tone0s.clear();
                tone1s.clear();
                rates.clear();
            }
            current.t1_s = t1;
            current.confidence = std::max(current.confidence, verdict.confidence);
            tone0s.push_back(verdict.tone0_hz);
            tone1s.push_back(verdict.tone1_hz);
            rates.push_back(verdict.rate_hz);
        } else if (open) {
            auto median = [](std::vector<double>& v) {
                std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2),
                                 v.end());
                return v[v.size() / 2];
            };
            current.tones_hz = {median(tone0s), median(tone1s)};
            current.rate_hz = median(rates);
            alerts.push_back(current);
            open = false;
        }
    }
    if (open) {
        auto median = [](std::vector<double>& v) {
            std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2),
                             v.end());
            return v[v.size() / 2];
        };
        current.tones_hz = {median(tone0s), median(tone1s)};
        current.rate_hz = median(rates);
        alerts.push_back(current);
    }
    return alerts;
}

std::string alert_log_line(const MonitorAlert& alert) {
    char tones[128] = {0};
    std::size_t off = 0;
    for (std::size_t i = 0; i < alert.tones_hz.size() && off + 16 < sizeof tones; ++i)
        off += static_cast<std::size_t>(std::snprintf(tones + off, sizeof tones - off, "%s%.0f",
                                                      i ? "," : "", alert.tones_hz[i]));
    char line[256];
    std::snprintf(line, sizeof line, "ALERT t0=%.3f t1=%.3f tones=%s rate=%.2f conf=%.3f",
                  alert.t0_s, alert.t1_s, tones, alert.rate_hz, alert.confidence);
    return line;
}

}  // namespace loadfsk
