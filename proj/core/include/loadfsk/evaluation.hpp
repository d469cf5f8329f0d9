#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "loadfsk/channel.hpp"
#include "loadfsk/frame.hpp"
#include "loadfsk/modem.hpp"
#include "loadfsk/waveform.hpp"

namespace loadfsk {

enum class BerVariant {
    Paper,    // printed prefactor 1/(2(M-1))
    Standard  // symbol-error sum scaled by M/(2(M-1))
};

/// Non-coherent M-FSK bit-error probability over AWGN:
/// pref * sum_{n=1..M-1} (-1)^{n+1}/(n+1) * C(M-1,n) * exp(-n*log2(M)*EbN0/(n+1)).
double ber_theory(std::size_t order, double ebn0_db, BerVariant variant);

/// Random bits -> modulate -> calibrated AWGN -> matched non-coherent
/// symbol detection (no framing); returns errors / n_bits. Deterministic
/// per (scheme, ebn0, n_bits, seed). Single-carrier schemes only; tones
/// should be orthogonal over the symbol window for theory comparisons.
double ber_montecarlo(const ModulationScheme& scheme, double ebn0_db, std::size_t n_bits,
                      std::uint64_t seed);

struct BerPoint {
    double ebn0_db = 0.0;
    double theory_pb = 0.0;
    double measured_pb = 0.0;
    std::size_t n_bits = 0;
    std::uint64_t seed = 0;
};

struct BerReport {
    std::string scheme;
    std::vector<BerPoint> points;
};

BerReport run_ber_grid(const ModulationScheme& scheme, const std::vector<double>& ebn0_grid,
                       std::size_t n_bits, std::uint64_t seed,
                       BerVariant variant = BerVariant::Standard);

/// CSV with header "ebn0_db,theory_pb,measured_pb,n_bits,seed".
void write_ber_csv(const std::string& path, const BerReport& report);

struct SweepSpec {
    double f_start_hz = 2000.0;
    double f_end_hz = 63000.0;
    double step_hz = 100.0;
    double step_duration_s = 0.1;

    std::size_t n_steps() const;
    void validate() const;  // f_start < f_end <= 63 kHz, step > 0
};

/// Staircase chirp: consecutive constant-frequency steps from f_start
/// upward by step_hz, each step_duration_s long.
Waveform sweep_generate(const SweepSpec& spec, double sample_rate);

enum class Overhead { None, Framed };

/// Seconds to transmit size_bits at bps. Overhead::None is the bare
/// size/bps accounting; Framed adds preamble/length/CRC bits per frame
/// (payloads chunked to chunk_bits in dynamic mode).
double transmission_time(double size_bits, double bps, Overhead overhead = Overhead::None,
                         const FrameMode& mode = FrameMode::dynamic(),
                         std::size_t chunk_bits = kMaxDynamicPayloadBits);

struct RatePoint {
    double rate_bps = 0.0;
    double ber = 0.0;
    std::size_t bits = 0;
    std::size_t bit_errors = 0;
    double snr_db = 0.0;
};

/// End-to-end framed loopback through a calibrated AWGN channel at each
/// rate. Undetected frames count all their payload bits as errors.
/// Throws if a rate violates the tone-spacing requirement (spacing >= 2/T_b).
std::vector<RatePoint> run_rate_table(double snr_db, ModulationScheme::Kind kind,
                                      const std::vector<double>& rates_bps,
                                      std::size_t bits_per_rate, std::uint64_t seed);

/// CSV with header "rate_bps,ber,bits,bit_errors,snr_db".
void write_rate_csv(const std::string& path, const std::vector<RatePoint>& table);

/// Scheme factory used by the rate table and the CLI: BFSK, 4-FSK or
/// 4-subcarrier at an aggregate bit rate.
ModulationScheme scheme_for_rate(ModulationScheme::Kind kind, double rate_bps,
                                 double sample_rate = 48000.0);

}  // namespace loadfsk
