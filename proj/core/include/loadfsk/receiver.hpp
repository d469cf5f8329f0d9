#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "loadfsk/bits.hpp"
#include "loadfsk/frame.hpp"
#include "loadfsk/modem.hpp"
#include "loadfsk/waveform.hpp"

namespace loadfsk {

struct ReceiverConfig {
    std::size_t fft_window = 1024;  // analysis window, power of two
    std::size_t hop = 256;          // analysis hop
    double bit_time = 0.01;         // symbol period T_b, seconds
    std::vector<double> tones;      // f_0..f_{M-1}, symbol index order
    double sample_rate = 48000.0;
    double preamble_threshold = 0.7;  // normalized correlation in [0, 1]
    FrameMode frame_mode;
    bool noise_reduction = true;  // trailing spectral-median subtraction

    std::size_t samples_per_symbol() const;
    double bin_hz() const { return sample_rate / static_cast<double>(fft_window); }

    /// Matching receiver for a transmit scheme: tones/bit time copied, and
    /// the analysis window sized to fit inside one symbol (the calibration
    /// track needs whole windows between symbol transitions).
    static ReceiverConfig for_scheme(const ModulationScheme& scheme, const FrameMode& mode);

    void validate() const;
};

/// Spectral energy at each tone over one Hann-windowed frame
/// (single-bin Goertzel evaluation, no full FFT).
std::vector<double> tone_energies(std::span<const float> window_samples,
                                  const std::vector<double>& tones, double sample_rate);

/// Rectangular-window variant (matched detection over aligned symbols).
std::vector<double> tone_energies_rect(std::span<const float> window_samples,
                                       const std::vector<double>& tones, double sample_rate);

struct PreambleDetection {
    std::size_t offset = 0;           // sample index of the preamble start
    double bit_time_estimate = 0.0;   // from the detected alternation
    double amplitude_estimate = 0.0;  // dominant-tone amplitude during preamble
    double correlation = 0.0;         // peak normalized correlation
};

/// Cross-correlate the per-hop tone-decision track against the 1,0,1,0,...
/// calibration template. Returns the earliest detection at or above
/// cfg.preamble_threshold, refined to sub-hop accuracy, or nullopt.
std::optional<PreambleDetection> detect_preamble(const Waveform& stream,
                                                 const ReceiverConfig& cfg,
                                                 std::size_t start = 0);

struct DemodFrame {
    FrameStatus status = FrameStatus::Ok;
    Bits payload;                      // received bits; trustworthy only when Ok
    std::size_t preamble_offset = 0;   // sample index of the frame's preamble
    double correlation = 0.0;
};

/// Demodulation state machine phases (calibration search -> length field /
/// static payload -> payload -> CRC -> back to search).
enum class DemodPhase { Searching, LengthField, PayloadStatic, PayloadDynamic, Crc };

/// Incremental demodulator; callers feed successive sample blocks (the same
/// contract a live capture adapter would use) and collect decoded frames.
class StreamDemodulator {
public:
    explicit StreamDemodulator(const ReceiverConfig& cfg);

    void push(std::span<const float> block);
    /// Signal end of stream; an in-flight frame is flushed as Truncated.
    void finish();

    std::vector<DemodFrame> take_frames();
    DemodPhase phase() const { return phase_; }

private:
    void process();
    bool try_detect();
    bool continue_decode();
    void emit_frame();
    int decide_symbol(std::size_t sym_index) const;
    std::size_t symbol_start(std::size_t sym_index) const;

    ReceiverConfig cfg_;
    std::vector<float> window_;
    std::vector<float> buffer_;
    std::size_t base_ = 0;  // absolute index of buffer_[0]
    bool finished_ = false;

    DemodPhase phase_ = DemodPhase::Searching;
    std::size_t frame_start_ = 0;  // absolute preamble offset
    double frame_corr_ = 0.0;
    Bits body_bits_;
    std::size_t body_syms_done_ = 0;
    std::vector<DemodFrame> frames_;
};

/// Run the state machine over a whole waveform; one result per frame.
std::vector<DemodFrame> demodulate_stream(const Waveform& stream, const ReceiverConfig& cfg);

/// Multi-carrier receive: one demodulation pass per subcarrier pair; frames
/// are re-interleaved round-robin (frame i rode subcarrier i mod n).
std::vector<DemodFrame> demodulate_multicarrier(const Waveform& stream,
                                                const ModulationScheme& scheme,
                                                const FrameMode& mode);

/// Peak tone-bin power against the median off-tone bin power, corrected for
/// the analysis window gain, as a full-band SNR estimate in dB.
/// Throws std::runtime_error when no tone activity is present.
double estimate_snr(const Waveform& stream, double tone_hz, const ReceiverConfig& cfg);

/// Anti-alias low-pass then integer decimation to the smallest rate
/// >= 2.5 * band_hi. Full-band targets return the input unchanged.
Waveform downsample(const Waveform& stream, double band_lo_hz, double band_hi_hz);

}  // namespace loadfsk
