#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace loadfsk {

/// Periodic Hann window of length n.
std::vector<float> hann_window(std::size_t n);

/// Power of the single-frequency DTFT bin |sum x[k] w[k] e^{-j2pi f k / fs}|^2
/// computed with the Goertzel recurrence. `window` may be empty (rectangular)
/// or must match x in length.
double goertzel_power(std::span<const float> x, std::span<const float> window,
                      double freq_hz, double sample_rate);

/// Complex correlation sum x[k] w[k] e^{-j2pi f k / fs} (same bin as above).
std::complex<double> goertzel_bin(std::span<const float> x, std::span<const float> window,
                                  double freq_hz, double sample_rate);

/// In-place iterative radix-2 FFT; size must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& data);

std::size_t next_pow2(std::size_t n);
std::size_t prev_pow2(std::size_t n);

struct Spectrogram {
    std::size_t window = 0;
    std::size_t hop = 0;
    double sample_rate = 0.0;
    std::size_t n_bins = 0;                  // window/2 + 1
    std::vector<std::vector<double>> power;  // [frame][bin]

    double bin_hz() const { return sample_rate / static_cast<double>(window); }
    double frame_time(std::size_t frame) const {
        return (static_cast<double>(frame * hop) + static_cast<double>(window) / 2.0) / sample_rate;
    }
};

/// Hann-windowed power spectrogram. window must be a power of two.
Spectrogram spectrogram(std::span<const float> x, double sample_rate,
                        std::size_t window, std::size_t hop);

/// Odd-length windowed-sinc low-pass taps (Hamming window), unity DC gain.
std::vector<double> design_lowpass(double cutoff_hz, double sample_rate, std::size_t taps);

/// Band-pass as difference of two low-passes, zero gain at DC.
std::vector<double> design_bandpass(double f_lo, double f_hi, double sample_rate,
                                    std::size_t taps);

/// Convolve with an odd-length FIR and compensate the (taps-1)/2 group delay,
/// returning a signal the same length as the input.
std::vector<float> fir_filter_same(std::span<const float> x, const std::vector<double>& taps);

/// Piecewise-linear interpolation over (x, y) anchors with strictly
/// increasing x. Throws std::out_of_range outside [x_front, x_back].
double interp_linear(const std::vector<std::pair<double, double>>& anchors, double x);

}  // namespace loadfsk
