#include "loadfsk/dsp.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace loadfsk {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

std::vector<float> hann_window(std::size_t n) {
    std::vector<float> w(n);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = static_cast<float>(0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(i) /
                                                       static_cast<double>(n)));
    return w;
}

std::complex<double> goertzel_bin(std::span<const float> x, std::span<const float> window,
                                  double freq_hz, double sample_rate) {
    if (!window.empty() && window.size() != x.size())
        throw std::invalid_argument("goertzel: window/input length mismatch");
    const double omega = kTwoPi * freq_hz / sample_rate;
    const double coeff = 2.0 * std::cos(omega);
    double s_prev = 0.0, s_prev2 = 0.0;
    if (window.empty()) {
        for (float v : x) {
            const double s = static_cast<double>(v) + coeff * s_prev - s_prev2;
            s_prev2 = s_prev;
            s_prev = s;
        }
    } else {
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double s = static_cast<double>(x[i]) * static_cast<double>(window[i]) +
                             coeff * s_prev - s_prev2;
            s_prev2 = s_prev;
            s_prev = s;
        }
    }
    // Equivalent to sum x[k] e^{-j omega k} up to the final phase factor,
    // which does not affect magnitude.
    const double re = s_prev - s_prev2 * std::cos(omega);
    const double im = s_prev2 * std::sin(omega);
    return {re, im};
}

double goertzel_power(std::span<const float> x, std::span<const float> window,
                      double freq_hz, double sample_rate) {
    return std::norm(goertzel_bin(x, window, freq_hz, sample_rate));
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n)
        p <<= 1;
    return p;
}

std::size_t prev_pow2(std::size_t n) {
    if (n == 0)
        return 0;
    std::size_t p = 1;
    while ((p << 1) <= n)
        p <<= 1;
    return p;
}

void fft_inplace(std::vector<std::complex<double>>& data) {
    const std::size_t n = data.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft size must be a power of two");

    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(data[i], data[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -kTwoPi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = data[i + k];
                const auto v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

Spectrogram spectrogram(std::span<const float> x, double sample_rate,
                        std::size_t window, std::size_t hop) {
    if (window == 0 || (window & (window - 1)) != 0)
        throw std::invalid_argument("spectrogram window must be a power of two");
    if (hop == 0 || hop > window)
        throw std::invalid_argument("spectrogram hop must be in [1, window]");

    Spectrogram sg;
    sg.window = window;
    sg.hop = hop;
    sg.sample_rate = sample_rate;
    sg.n_bins = window / 2 + 1;

    const auto w = hann_window(window);
    std::vector<std::complex<double>> buf(window);
    for (std::size_t start = 0; start + window <= x.size(); start += hop) {
        for (std::size_t i = 0; i < window; ++i)
            buf[i] = {static_cast<double>(x[start + i]) * static_cast<double>(w[i]), 0.0};
        fft_inplace(buf);
        std::vector<double> row(sg.n_bins);
        for (std::size_t k = 0; k < sg.n_bins; ++k)
            row[k] = std::norm(buf[k]);
        sg.power.push_back(std::move(row));
    }
    return sg;
}

std::vector<double> design_lowpass(double cutoff_hz, double sample_rate, std::size_t taps) {
    if (taps % 2 == 0)
        throw std::invalid_argument("FIR tap count must be odd");
    if (cutoff_hz <= 0.0 || cutoff_hz >= sample_rate / 2.0)
        throw std::invalid_argument("FIR cutoff must lie inside (0, Nyquist)");
    const double fc = cutoff_hz / sample_rate;  // normalized
    const auto m = static_cast<std::ptrdiff_t>(taps / 2);
    std::vector<double> h(taps);
    double sum = 0.0;
    for (std::ptrdiff_t i = -m; i <= m; ++i) {
        const double sinc = (i == 0) ? 2.0 * fc
                                     : std::sin(kTwoPi * fc * static_cast<double>(i)) /
                                           (std::numbers::pi * static_cast<double>(i));
        const double hamming =
            0.54 - 0.46 * std::cos(kTwoPi * static_cast<double>(i + m) /
                                   static_cast<double>(taps - 1));
        h[static_cast<std::size_t>(i + m)] = sinc * hamming;
        sum += h[static_cast<std::size_t>(i + m)];
    }
    for (double& v : h)
        v /= sum;  // unity gain at DC
    return h;
}

std::vector<double> design_bandpass(double f_lo, double f_hi, double sample_rate,
                                    std::size_t taps) {
    if (!(0.0 < f_lo && f_lo < f_hi && f_hi < sample_rate / 2.0))
        throw std::invalid_argument("band-pass edges must satisfy 0 < lo < hi < Nyquist");
    const auto hi = design_lowpass(f_hi, sample_rate, taps);
    const auto lo = design_lowpass(f_lo, sample_rate, taps);
    std::vector<double> h(taps);
    for (std::size_t i = 0; i < taps; ++i)
        h[i] = hi[i] - lo[i];
    return h;
}

std::vector<float> fir_filter_same(std::span<const float> x, const std::vector<double>& taps) {
    const std::size_t m = taps.size() / 2;  // group delay, taps odd
    std::vector<float> y(x.size(), 0.0f);
    for (std::size_t n = 0; n < x.size(); ++n) {
        double acc = 0.0;
        // y[n] = sum_k h[k] x[n + m - k], skipping out-of-range input
        for (std::size_t k = 0; k < taps.size(); ++k) {
            const std::ptrdiff_t idx = static_cast<std::ptrdiff_t>(n + m) -
                                       static_cast<std::ptrdiff_t>(k);
            if (idx >= 0 && idx < static_cast<std::ptrdiff_t>(x.size()))
                acc += taps[k] * static_cast<double>(x[static_cast<std::size_t>(idx)]);
        }
        y[n] = static_cast<float>(acc);
    }
    return y;
}

double interp_linear(const std::vector<std::pair<double, double>>& anchors, double x) {
    if (anchors.empty())
        throw std::invalid_argument("interp_linear: no anchors");
    if (x < anchors.front().first || x > anchors.back().first)
        throw std::out_of_range("interp_linear: query outside anchor range");
    for (std::size_t i = 1; i < anchors.size(); ++i) {
        if (x <= anchors[i].first) {
            const auto [x0, y0] = anchors[i - 1];
            const auto [x1, y1] = anchors[i];
            if (x1 == x0)
                return y1;
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
        }
    }
    return anchors.back().second;
}

}  // namespace loadfsk
