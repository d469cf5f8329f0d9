#pragma once

#include <cstddef>
#include <vector>

#include "loadfsk/bits.hpp"
#include "loadfsk/frame.hpp"
#include "loadfsk/waveform.hpp"

namespace loadfsk {

enum class WaveKind {
    Sine,   // amplitude * cos(2*pi*f*t + phi)
    Square  // {0, amplitude} square wave at f (busy/idle power levels)
};

struct SubcarrierPair {
    double f0 = 0.0;  // tone for bit 0
    double f1 = 0.0;  // tone for bit 1
};

struct ModulationScheme {
    enum class Kind { BFSK, MFSK, MultiCarrier };

    Kind kind = Kind::BFSK;
    std::vector<double> tones;  // f_0..f_{M-1}; MultiCarrier: pairs flattened in order
    double bit_time = 0.01;     // symbol period T_b in seconds
    double sample_rate = 48000.0;
    double amplitude = 1.0;
    std::vector<double> phases;  // per-tone initial phase, radians; empty = all zero

    std::size_t order() const { return tones.size(); }          // M
    std::size_t bits_per_symbol() const;                        // log2(M)
    std::size_t samples_per_symbol() const;                     // round(T_b * Fs)
    std::vector<SubcarrierPair> subcarriers() const;            // MultiCarrier view
    double phase(std::size_t tone_index) const;

    /// Throws std::invalid_argument on Nyquist violations, duplicate tones,
    /// non-power-of-two M-FSK order, or overlapping subcarrier pairs.
    void validate() const;

    // Default desk-scale schemes in the 5-8.5 kHz band. `bit_rate` is the
    // aggregate bit rate, so T_b = bits_per_symbol/rate (M-FSK) and
    // T_b = n_subcarriers/rate (multi-carrier).
    static ModulationScheme bfsk(double bit_rate, double sample_rate = 48000.0);
    static ModulationScheme mfsk4(double bit_rate, double sample_rate = 48000.0);
    static ModulationScheme multicarrier4(double bit_rate, double sample_rate = 48000.0);
};

/// Truncated Fourier series of a unit square wave:
/// (4/pi) * sum_{n=1..N} sin(2*pi*(2n-1)*f*t) / (2n-1).
double square_partial_sum(double freq_hz, double t, int n_terms);

/// Group consecutive log2(M)-bit chunks, MSB-first, into symbol indices.
std::vector<int> bits_to_symbols(const Bits& bits, std::size_t order);

/// Inverse of bits_to_symbols.
Bits symbols_to_bits(const std::vector<int>& symbols, std::size_t order);

/// Modulate a symbol sequence; symbol k occupies samples
/// [round(k*T_b*Fs), round((k+1)*T_b*Fs)) of tone tones[symbol], with the
/// phase reset at each symbol boundary.
Waveform modulate_symbols(const std::vector<int>& symbols, const ModulationScheme& scheme,
                          WaveKind kind = WaveKind::Sine);

/// Modulate a bit vector (bits grouped per bits_to_symbols). BFSK/MFSK only.
Waveform modulate(const Bits& bits, const ModulationScheme& scheme,
                  WaveKind kind = WaveKind::Sine);

/// Sample-wise sum of per-subcarrier B-FSK waveforms, one bit stream per
/// pair, shorter streams zero-padded; peak normalized to <= 1.
Waveform multicarrier_modulate(const std::vector<Bits>& streams,
                               const std::vector<SubcarrierPair>& subcarriers,
                               double bit_time, double sample_rate,
                               double amplitude = 1.0, WaveKind kind = WaveKind::Sine);

// Frame-to-symbol packing shared by transmitter and receiver. The 8
// calibration bits are always signaled one per symbol slot, alternating
// between the extreme tones (bit 1 -> tones[M-1], bit 0 -> tones[0]) so the
// receiver sees a two-tone alternation regardless of M; the remaining frame
// bits are packed log2(M) per symbol and zero-padded to a symbol boundary.
std::vector<int> frame_to_symbols(const Bits& frame_bits, std::size_t order);

/// Waveform for one encoded frame under the packing above.
Waveform modulate_frame(const Bits& frame_bits, const ModulationScheme& scheme,
                        WaveKind kind = WaveKind::Sine);

/// Frame and modulate a sequence of payloads with `gap` silent samples
/// between frames. For MultiCarrier schemes frame i rides subcarrier i mod n.
Waveform modulate_payloads(const std::vector<Bits>& payloads, const FrameMode& mode,
                           const ModulationScheme& scheme, WaveKind kind = WaveKind::Sine,
                           std::size_t gap_samples = 0);

}  // namespace loadfsk
