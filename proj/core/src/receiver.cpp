#include "loadfsk/receiver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "loadfsk/dsp.hpp"

namespace loadfsk {

namespace {

constexpr double kEps = 1e-30;

std::size_t spb_of(const ReceiverConfig& cfg) {
    return static_cast<std::size_t>(std::llround(cfg.bit_time * cfg.sample_rate));
}

/// Per-hop normalized tone contrast in [-1, 1] between the extreme tones.
/// A trailing low-quantile (25th percentile) spectral floor per tone is
/// subtracted before the contrast: a low quantile tracks the noise/idle
/// level even while an alternating FSK signal occupies each tone about half
/// the time (a median would sit on the signal level there and cancel it).
/// The floor also stabilizes the denominator so that noise contrasts shrink
/// instead of saturating, and feeds the detector's energy-contrast gate.
struct DecisionTrack {
    std::vector<double> d;
    std::vector<double> dominant;  // max raw tone energy per hop
    std::vector<double> floor_sum; // trailing floor (both tones) per hop
};

DecisionTrack compute_track(const float* data, std::size_t len, const ReceiverConfig& cfg,
                            const std::vector<float>& win) {
    const std::size_t window = cfg.fft_window;
    const std::size_t hop = cfg.hop;
    const double f_lo = cfg.tones.front();
    const double f_hi = cfg.tones.back();

    DecisionTrack track;
    if (len < window)
        return track;
    const std::size_t n_hops = (len - window) / hop + 1;
    track.d.resize(n_hops);
    track.dominant.resize(n_hops);
    track.floor_sum.resize(n_hops);

    std::vector<double> e_lo(n_hops), e_hi(n_hops);
    for (std::size_t q = 0; q < n_hops; ++q) {
        const std::span<const float> frame(data + q * hop, window);
        e_lo[q] = goertzel_power(frame, win, f_lo, cfg.sample_rate);
        e_hi[q] = goertzel_power(frame, win, f_hi, cfg.sample_rate);
    }

    double floor_lo = 0.0, floor_hi = 0.0;
    const auto floor_span = static_cast<std::size_t>(cfg.sample_rate / static_cast<double>(hop));
    auto trailing_quantile = [&](const std::vector<double>& e, std::size_t q) {
        const std::size_t m = std::min(q, floor_span);
        if (m < 8)
            return 0.0;
        const std::size_t stride = std::max<std::size_t>(1, m / 256);
        std::vector<double> sample;
        for (std::size_t i = q - m; i < q; i += stride)
            sample.push_back(e[i]);
        const auto idx = static_cast<std::ptrdiff_t>(sample.size() / 4);  // 25th percentile
        std::nth_element(sample.begin(), sample.begin() + idx, sample.end());
        return sample[static_cast<std::size_t>(idx)];
    };

    for (std::size_t q = 0; q < n_hops; ++q) {
        if (cfg.noise_reduction && q % 32 == 0) {
            floor_lo = trailing_quantile(e_lo, q);
            floor_hi = trailing_quantile(e_hi, q);
        }
        const double fsum = cfg.noise_reduction ? floor_lo + floor_hi : 0.0;
        const double lo = cfg.noise_reduction ? std::max(0.0, e_lo[q] - floor_lo) : e_lo[q];
        const double hi = cfg.noise_reduction ? std::max(0.0, e_hi[q] - floor_hi) : e_hi[q];
        track.d[q] = (hi - lo) / (hi + lo + fsum + kEps);
        track.dominant[q] = std::max(e_lo[q], e_hi[q]);
        track.floor_sum[q] = fsum;
    }
    return track;
}

/// Hop offsets (relative to a candidate start) whose analysis window lies
/// fully inside preamble bit k, plus the bit's template sign.
struct TemplateBit {
    double sign;  // +1 for bit value 1 (first preamble bit), -1 for 0
    std::vector<std::size_t> hops;
};

std::vector<TemplateBit> build_template(const ReceiverConfig& cfg) {
    const std::size_t spb = spb_of(cfg);
    std::vector<TemplateBit> tmpl(kPreambleBits);
    for (std::size_t k = 0; k < kPreambleBits; ++k) {
        tmpl[k].sign = (k % 2 == 0) ? 1.0 : -1.0;  // preamble starts with a 1
        for (std::size_t q = (k * spb + cfg.hop - 1) / cfg.hop;; ++q) {
            if (q * cfg.hop + cfg.fft_window > (k + 1) * spb)
                break;
            if (q * cfg.hop >= k * spb)
                tmpl[k].hops.push_back(q);
        }
    }
    return tmpl;
}

double template_correlation(const DecisionTrack& track, std::size_t h0,
                            const std::vector<TemplateBit>& tmpl) {
    double acc = 0.0;
    double dom = 0.0, floor_sum = 0.0;
    for (const auto& bit : tmpl) {
        double mean = 0.0;
        for (std::size_t q : bit.hops) {
            const std::size_t idx = h0 + q;
            if (idx >= track.d.size())
                return -2.0;  // out of range
            mean += track.d[idx];
            dom += track.dominant[idx];
            floor_sum += track.floor_sum[idx];
        }
        mean /= static_cast<double>(bit.hops.size());
        acc += bit.sign * mean;
    }
    // Energy-contrast gate: a real calibration sequence stands far above
    // the trailing spectral floor; noise wobble around the floor does not.
    if (floor_sum > 0.0 && dom < 5.0 * floor_sum)
        return 0.0;
    return acc / static_cast<double>(tmpl.size());
}

/// Mean signed per-bit tone contrast with rectangular windows on the exact
/// bit grid; used to refine a coarse hit to sub-hop offset accuracy.
double refine_metric(const float* data, std::size_t len, const ReceiverConfig& cfg,
                     std::size_t s) {
    const double fs = cfg.sample_rate;
    const double tb = cfg.bit_time;
    double acc = 0.0;
    for (std::size_t k = 0; k < kPreambleBits; ++k) {
        const auto b0 = s + static_cast<std::size_t>(std::llround(static_cast<double>(k) * tb * fs));
        const auto b1 =
            s + static_cast<std::size_t>(std::llround(static_cast<double>(k + 1) * tb * fs));
        if (b1 > len || b1 <= b0)
            return -2.0;
        const std::span<const float> bit(data + b0, b1 - b0);
        const double lo = goertzel_power(bit, {}, cfg.tones.front(), fs);
        const double hi = goertzel_power(bit, {}, cfg.tones.back(), fs);
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        acc += sign * (hi - lo) / (hi + lo + kEps);
    }
    return acc / static_cast<double>(kPreambleBits);
}

struct InternalDetection {
    std::size_t offset = 0;  // relative to the span begin
    double corr = 0.0;
    double bit_time_est = 0.0;
    double amp_est = 0.0;
};

std::optional<InternalDetection> detect_on_span(const float* data, std::size_t len,
                                                const ReceiverConfig& cfg,
                                                const std::vector<float>& win,
                                                std::size_t max_candidate_sample) {
    const std::size_t spb = spb_of(cfg);
    const std::size_t preamble_span = kPreambleBits * spb;
    if (len < preamble_span + cfg.fft_window)
        return std::nullopt;

    const auto track = compute_track(data, len, cfg, win);
    const auto tmpl = build_template(cfg);

    const std::size_t last_candidate_sample =
        std::min(max_candidate_sample, len - preamble_span - cfg.fft_window);
    const std::size_t last_h0 = last_candidate_sample / cfg.hop;

    // Earliest threshold crossing, then the local peak. A start lined up an
    // even number of bits early still matches 8-2k template bits (same
    // parity), so the peak search must span those ghosts: 3 bits covers the
    // strongest one at -2 bits (correlation 6/8).
    std::optional<std::size_t> hit;
    for (std::size_t h0 = 0; h0 <= last_h0; ++h0) {
        if (template_correlation(track, h0, tmpl) >= cfg.preamble_threshold) {
            hit = h0;
            break;
        }
    }
    if (!hit)
        return std::nullopt;

    std::size_t best_h0 = *hit;
    double best_c = template_correlation(track, best_h0, tmpl);
    const std::size_t data_h0 = (len - preamble_span - cfg.fft_window) / cfg.hop;
    for (std::size_t h0 = *hit + 1; h0 <= std::min(data_h0, *hit + 3 * spb / cfg.hop); ++h0) {
        const double c = template_correlation(track, h0, tmpl);
        if (c > best_c) {
            best_c = c;
            best_h0 = h0;
        }
    }

    // Sub-hop refinement over +/- one bit around the coarse hit.
    const std::size_t coarse = best_h0 * cfg.hop;
    const std::size_t step = std::max<std::size_t>(1, cfg.hop / 4);
    const std::size_t lo = coarse > spb ? coarse - spb : 0;
    const std::size_t hi = coarse + spb;
    std::size_t best_s = coarse;
    double best_m = -2.0;
    for (std::size_t s = lo; s <= hi; s += step) {
        const double m = refine_metric(data, len, cfg, s);
        if (m > best_m) {
            best_m = m;
            best_s = s;
        }
    }

    InternalDetection det;
    det.offset = best_s;
    det.corr = best_c;

    // Bit-time estimate from the sign flips of the track across the
    // detected alternation.
    {
        std::vector<double> flip_pos;
        const std::size_t q0 = best_s / cfg.hop;
        const std::size_t q1 = std::min(track.d.size(), q0 + preamble_span / cfg.hop + 1);
        for (std::size_t q = q0 + 1; q < q1; ++q)
            if ((track.d[q] >= 0.0) != (track.d[q - 1] >= 0.0))
                flip_pos.push_back(static_cast<double>(q));
        if (flip_pos.size() >= 3) {
            std::vector<double> gaps;
            for (std::size_t i = 1; i < flip_pos.size(); ++i)
                gaps.push_back(flip_pos[i] - flip_pos[i - 1]);
            std::nth_element(gaps.begin(),
                             gaps.begin() + static_cast<std::ptrdiff_t>(gaps.size() / 2),
                             gaps.end());
            det.bit_time_est =
                gaps[gaps.size() / 2] * static_cast<double>(cfg.hop) / cfg.sample_rate;
        } else {
            det.bit_time_est = cfg.bit_time;
        }
    }

    // Amplitude from the dominant tone of each preamble bit.
    {
        double amp = 0.0;
        int counted = 0;
        for (std::size_t k = 0; k < kPreambleBits; ++k) {
            const std::size_t b0 = best_s + k * spb;
            if (b0 + spb > len)
                break;
            const std::span<const float> bit(data + b0, spb);
            const double f = (k % 2 == 0) ? cfg.tones.back() : cfg.tones.front();
            const double e = goertzel_power(bit, {}, f, cfg.sample_rate);
            amp += 2.0 * std::sqrt(e) / static_cast<double>(spb);
            ++counted;
        }
        det.amp_est = counted > 0 ? amp / counted : 0.0;
    }
    return det;
}

}  // namespace

std::size_t ReceiverConfig::samples_per_symbol() const {
    return static_cast<std::size_t>(std::llround(bit_time * sample_rate));
}

ReceiverConfig ReceiverConfig::for_scheme(const ModulationScheme& scheme, const FrameMode& mode) {
    scheme.validate();
    if (scheme.kind == ModulationScheme::Kind::MultiCarrier)
        throw std::invalid_argument(
            "build one receiver per subcarrier pair for multi-carrier schemes");

    ReceiverConfig cfg;
    cfg.bit_time = scheme.bit_time;
    cfg.tones = scheme.tones;
    cfg.sample_rate = scheme.sample_rate;
    cfg.frame_mode = mode;

    // The calibration track needs several independent analysis windows per
    // bit for the correlation noise floor to stay well under the detection
    // threshold, so size the window near a third of the symbol.
    const std::size_t spb = cfg.samples_per_symbol();
    std::size_t window = std::clamp<std::size_t>(prev_pow2(spb / 3), 32, 1024);
    std::size_t hop = std::max<std::size_t>(1, window / 4);
    while (window >= 16 && window + hop > spb) {
        window /= 2;
        hop = std::max<std::size_t>(1, window / 4);
    }
    if (window < 16)
        throw std::invalid_argument("bit time too short for the analysis window");
    cfg.fft_window = window;
    cfg.hop = hop;
    cfg.validate();
    return cfg;
}

void ReceiverConfig::validate() const {
    if (fft_window < 16 || (fft_window & (fft_window - 1)) != 0)
        throw std::invalid_argument("fft window must be a power of two >= 16");
    if (hop == 0 || hop > fft_window)
        throw std::invalid_argument("hop must be in [1, window]");
    if (tones.size() < 2 || (tones.size() & (tones.size() - 1)) != 0)
        throw std::invalid_argument("receiver needs a power-of-two tone count >= 2");
    for (double f : tones)
        if (!(f > 0.0) || f >= sample_rate / 2.0)
            throw std::invalid_argument("tone outside (0, Nyquist)");
    if (!(bit_time > 0.0))
        throw std::invalid_argument("bit time must be positive");
    if (!(preamble_threshold > 0.0) || preamble_threshold > 1.0)
        throw std::invalid_argument("preamble threshold must lie in (0, 1]");
    const std::size_t spb = samples_per_symbol();
    if (fft_window + hop > spb)
        throw std::invalid_argument("analysis window does not fit inside one symbol");
    const double min_tone = *std::min_element(tones.begin(), tones.end());
    if (static_cast<double>(spb) < 2.0 * sample_rate / min_tone)
        throw std::invalid_argument("symbol shorter than two cycles of the lowest tone");
}

std::vector<double> tone_energies(std::span<const float> window_samples,
                                  const std::vector<double>& tones, double sample_rate) {
    if (tones.empty())
        throw std::invalid_argument("tone_energies: no tones");
    const double min_tone = *std::min_element(tones.begin(), tones.end());
    for (double f : tones)
        if (f >= sample_rate / 2.0)
            throw std::invalid_argument("tone at or above Nyquist");
    if (static_cast<double>(window_samples.size()) < 2.0 * sample_rate / min_tone)
        throw std::invalid_argument("window shorter than two cycles of the lowest tone");

    const auto win = hann_window(window_samples.size());
    std::vector<double> energies(tones.size());
    for (std::size_t i = 0; i < tones.size(); ++i)
        energies[i] = goertzel_power(window_samples, win, tones[i], sample_rate);
    return energies;
}

std::vector<double> tone_energies_rect(std::span<const float> window_samples,
                                       const std::vector<double>& tones, double sample_rate) {
    std::vector<double> energies(tones.size());
    for (std::size_t i = 0; i < tones.size(); ++i)
        energies[i] = goertzel_power(window_samples, {}, tones[i], sample_rate);
    return energies;
}

std::optional<PreambleDetection> detect_preamble(const Waveform& stream,
                                                 const ReceiverConfig& cfg, std::size_t start) {
    cfg.validate();
    if (start >= stream.samples.size())
        return std::nullopt;
    const auto win = hann_window(cfg.fft_window);
    const auto det = detect_on_span(stream.samples.data() + start,
                                    stream.samples.size() - start, cfg, win,
                                    stream.samples.size() - start);
    if (!det)
        return std::nullopt;
    PreambleDetection out;
    out.offset = start + det->offset;
    out.bit_time_estimate = det->bit_time_est;
    out.amplitude_estimate = det->amp_est;
    out.correlation = det->corr;
    return out;
}

StreamDemodulator::StreamDemodulator(const ReceiverConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    window_ = hann_window(cfg_.fft_window);
}

void StreamDemodulator::push(std::span<const float> block) {
    buffer_.insert(buffer_.end(), block.begin(), block.end());
    process();
}

void StreamDemodulator::finish() {
    finished_ = true;
    process();
    if (phase_ != DemodPhase::Searching) {
        emit_frame();  // flush the in-flight frame as truncated
        phase_ = DemodPhase::Searching;
    }
}

std::vector<DemodFrame> StreamDemodulator::take_frames() {
    return std::exchange(frames_, {});
}

std::size_t StreamDemodulator::symbol_start(std::size_t sym_index) const {
    return frame_start_ + static_cast<std::size_t>(std::llround(
                              static_cast<double>(sym_index) * cfg_.bit_time * cfg_.sample_rate));
}

int StreamDemodulator::decide_symbol(std::size_t sym_index) const {
    const std::size_t s0 = symbol_start(sym_index);
    const std::size_t s1 = symbol_start(sym_index + 1);
    const auto win = hann_window(s1 - s0);
    const float* base_ptr = buffer_.data() + (s0 - base_);
    const std::span<const float> sym(base_ptr, s1 - s0);
    int best = 0;
    double best_e = -1.0;
    for (std::size_t m = 0; m < cfg_.tones.size(); ++m) {
        const double e = goertzel_power(sym, win, cfg_.tones[m], cfg_.sample_rate);
        if (e > best_e) {
            best_e = e;
            best = static_cast<int>(m);
        }
    }
    return best;
}

void StreamDemodulator::process() {
    const std::size_t spb = spb_of(cfg_);
    const std::size_t preamble_span = kPreambleBits * spb;
    const std::size_t scan_region = preamble_span;  // candidates per search pass
    const std::size_t search_need = scan_region + preamble_span + cfg_.fft_window + 2 * spb;

    bool progressed = true;
    while (progressed) {
        progressed = false;
        if (phase_ == DemodPhase::Searching) {
            if (buffer_.size() >= search_need || (finished_ && !buffer_.empty())) {
                if (try_detect()) {
                    progressed = true;
                } else if (buffer_.size() >= search_need) {
                    // All candidates in the scan region were rejected.
                    buffer_.erase(buffer_.begin(),
                                  buffer_.begin() + static_cast<std::ptrdiff_t>(scan_region));
                    base_ += scan_region;
                    progressed = buffer_.size() >= search_need;
                }
            }
        } else {
            progressed = continue_decode();
        }
    }
}

bool StreamDemodulator::try_detect() {
    const std::size_t spb = spb_of(cfg_);
    const std::size_t scan_region = kPreambleBits * spb;
    const auto det =
        detect_on_span(buffer_.data(), buffer_.size(), cfg_, window_, scan_region);
    if (!det)
        return false;

    frame_start_ = base_ + det->offset;
    frame_corr_ = det->corr;
    body_bits_.clear();
    body_syms_done_ = 0;
    phase_ = (cfg_.frame_mode.kind == FrameMode::Kind::Dynamic) ? DemodPhase::LengthField
                                                                : DemodPhase::PayloadStatic;
    return true;
}

bool StreamDemodulator::continue_decode() {
    const std::size_t bits_per_sym = [this] {
        std::size_t b = 0;
        while ((std::size_t{1} << b) < cfg_.tones.size())
            ++b;
        return std::max<std::size_t>(1, b);
    }();

    // Total body bits (length field + payload + CRC) once knowable.
    auto body_total = [&]() -> std::optional<std::size_t> {
        if (cfg_.frame_mode.kind == FrameMode::Kind::Static)
            return cfg_.frame_mode.static_size + kCrcBits;
        if (body_bits_.size() < kLengthFieldBits)
            return std::nullopt;
        const auto len = static_cast<std::size_t>(read_uint(body_bits_, 0, kLengthFieldBits));
        return kLengthFieldBits + len + kCrcBits;
    };

    while (true) {
        const auto total = body_total();
        if (total && body_bits_.size() >= *total) {
            emit_frame();
            return true;
        }

        const std::size_t sym = kPreambleBits + body_syms_done_;
        const std::size_t s1 = symbol_start(sym + 1);
        if (s1 > base_ + buffer_.size()) {
            if (finished_) {
                emit_frame();  // truncated
                return false;
            }
            return false;  // wait for more samples
        }

        const int decision = decide_symbol(sym);
        append_uint(body_bits_, static_cast<std::uint64_t>(decision),
                    static_cast<int>(bits_per_sym));
        ++body_syms_done_;

        // Keep the buffer bounded during long payloads.
        const std::size_t sym_start = symbol_start(sym);
        if (sym_start > base_ + cfg_.fft_window) {
            const std::size_t drop = sym_start - base_ - cfg_.fft_window;
            buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(drop));
            base_ += drop;
        }

        // Phase bookkeeping for observers.
        if (cfg_.frame_mode.kind == FrameMode::Kind::Dynamic) {
            const auto t = body_total();
            if (!t)
                phase_ = DemodPhase::LengthField;
            else if (body_bits_.size() + kCrcBits < *t)
                phase_ = DemodPhase::PayloadDynamic;
            else
                phase_ = DemodPhase::Crc;
        } else {
            phase_ = (body_bits_.size() + kCrcBits < cfg_.frame_mode.static_size + kCrcBits)
                         ? DemodPhase::PayloadStatic
                         : DemodPhase::Crc;
        }
    }
}

void StreamDemodulator::emit_frame() {
    Bits frame = preamble_bits();

    std::size_t body_len = body_bits_.size();
    if (cfg_.frame_mode.kind == FrameMode::Kind::Dynamic &&
        body_bits_.size() >= kLengthFieldBits) {
        const auto len = static_cast<std::size_t>(read_uint(body_bits_, 0, kLengthFieldBits));
        body_len = std::min(body_bits_.size(), kLengthFieldBits + len + kCrcBits);
    } else if (cfg_.frame_mode.kind == FrameMode::Kind::Static) {
        body_len = std::min(body_bits_.size(), cfg_.frame_mode.static_size + kCrcBits);
    }
    frame.insert(frame.end(), body_bits_.begin(),
                 body_bits_.begin() + static_cast<std::ptrdiff_t>(body_len));

    const DecodedFrame decoded = decode_frame(frame, cfg_.frame_mode);

    DemodFrame out;
    out.status = decoded.status;
    out.payload = decoded.payload;
    out.preamble_offset = frame_start_;
    out.correlation = frame_corr_;
    frames_.push_back(std::move(out));

    // Resume searching after the frame.
    const std::size_t consumed_syms = kPreambleBits + body_syms_done_;
    const std::size_t frame_end = symbol_start(consumed_syms);
    if (frame_end > base_) {
        const std::size_t drop = std::min(frame_end - base_, buffer_.size());
        buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(drop));
        base_ += drop;
    }
    body_bits_.clear();
    body_syms_done_ = 0;
    phase_ = DemodPhase::Searching;
}

std::vector<DemodFrame> demodulate_stream(const Waveform& stream, const ReceiverConfig& cfg) {
    StreamDemodulator demod(cfg);
    // Feed in blocks to exercise the same path a live adapter would use.
    constexpr std::size_t kBlock = 1 << 16;
    for (std::size_t i = 0; i < stream.samples.size(); i += kBlock) {
        const std::size_t n = std::min(kBlock, stream.samples.size() - i);
        demod.push(std::span<const float>(stream.samples.data() + i, n));
    }
    demod.finish();
    return demod.take_frames();
}

std::vector<DemodFrame> demodulate_multicarrier(const Waveform& stream,
                                                const ModulationScheme& scheme,
                                                const FrameMode& mode) {
    if (scheme.kind != ModulationScheme::Kind::MultiCarrier)
        throw std::invalid_argument("demodulate_multicarrier needs a multi-carrier scheme");
    scheme.validate();

    std::vector<std::vector<DemodFrame>> lanes;
    for (const auto& pair : scheme.subcarriers()) {
        ModulationScheme sub;
        sub.kind = ModulationScheme::Kind::BFSK;
        sub.tones = {pair.f0, pair.f1};
        sub.bit_time = scheme.bit_time;
        sub.sample_rate = scheme.sample_rate;
        lanes.push_back(demodulate_stream(stream, ReceiverConfig::for_scheme(sub, mode)));
    }

    // Frame i rode lane i mod n: re-interleave in round-robin order.
    std::vector<DemodFrame> merged;
    for (std::size_t round = 0;; ++round) {
        bool any = false;
        for (auto& lane : lanes) {
            if (round < lane.size()) {
                merged.push_back(std::move(lane[round]));
                any = true;
            }
        }
        if (!any)
            break;
    }
    return merged;
}

double estimate_snr(const Waveform& stream, double tone_hz, const ReceiverConfig& cfg) {
    if (tone_hz <= 0.0 || tone_hz >= stream.sample_rate / 2.0)
        throw std::invalid_argument("tone outside (0, Nyquist)");
    const auto sg = spectrogram(stream.samples, stream.sample_rate, cfg.fft_window, cfg.hop);
    if (sg.power.empty())
        throw std::runtime_error("estimate_snr: stream shorter than one analysis window");

    const auto n = static_cast<double>(cfg.fft_window);
    const auto tone_bin = static_cast<std::size_t>(std::llround(tone_hz / sg.bin_hz()));

    // Robust "on" power at the tone: 95th percentile over time, best of the
    // three bins around the nominal one (the tone need not be bin-centred).
    double p_sig = 0.0;
    for (std::size_t b = tone_bin > 0 ? tone_bin - 1 : 0;
         b <= std::min(tone_bin + 1, sg.n_bins - 1); ++b) {
        std::vector<double> col(sg.power.size());
        for (std::size_t t = 0; t < sg.power.size(); ++t)
            col[t] = sg.power[t][b];
        const auto q = static_cast<std::size_t>(0.95 * static_cast<double>(col.size() - 1));
        std::nth_element(col.begin(), col.begin() + static_cast<std::ptrdiff_t>(q), col.end());
        p_sig = std::max(p_sig, col[q]);
    }

    // Noise level: median over off-tone bins of the time-averaged power.
    std::vector<double> bin_means;
    for (std::size_t b = 2; b + 1 < sg.n_bins; ++b) {
        if (b + 4 >= tone_bin && b <= tone_bin + 4)
            continue;
        double mean = 0.0;
        for (std::size_t t = 0; t < sg.power.size(); ++t)
            mean += sg.power[t][b];
        bin_means.push_back(mean / static_cast<double>(sg.power.size()));
    }
    if (bin_means.empty())
        throw std::runtime_error("estimate_snr: no off-tone bins available");
    std::nth_element(bin_means.begin(),
                     bin_means.begin() + static_cast<std::ptrdiff_t>(bin_means.size() / 2),
                     bin_means.end());
    const double p_noise = bin_means[bin_means.size() / 2];

    if (p_noise <= 0.0) {
        if (p_sig <= 0.0)
            throw std::runtime_error("estimate_snr: no tone activity detected");
        return 60.0;  // noiseless synthetic input; report a ceiling
    }
    const double contrast = (p_sig - p_noise) / p_noise;
    if (contrast < 6.0)
        throw std::runtime_error("estimate_snr: no tone activity detected");

    // Hann window: sum w = N/2, sum w^2 = 3N/8, so full-band SNR = 3R/N.
    return 10.0 * std::log10(contrast * 3.0 / n);
}

Waveform downsample(const Waveform& stream, double band_lo_hz, double band_hi_hz) {
    if (!(0.0 <= band_lo_hz && band_lo_hz < band_hi_hz))
        throw std::invalid_argument("downsample: need 0 <= lo < hi");
    if (band_hi_hz >= stream.sample_rate / 2.0)
        throw std::invalid_argument("downsample: band above Nyquist");

    const double fs = stream.sample_rate;
    const auto decim = static_cast<std::size_t>(std::floor(fs / (2.5 * band_hi_hz)));
    if (decim <= 1)
        return stream;

    const double fs_out = fs / static_cast<double>(decim);
    const double cutoff = std::min(1.15 * band_hi_hz, 0.45 * fs_out);
    const double transition = std::max(fs_out / 2.0 - band_hi_hz, 0.05 * fs_out);
    auto taps_n = static_cast<std::size_t>(std::ceil(3.3 * fs / transition));
    taps_n = std::min<std::size_t>(801, std::max<std::size_t>(31, taps_n)) | 1u;

    const auto lp = design_lowpass(cutoff, fs, taps_n);
    const auto filtered = fir_filter_same(stream.samples, lp);

    Waveform out;
    out.sample_rate = fs_out;
    out.samples.reserve(filtered.size() / decim + 1);
    for (std::size_t i = 0; i < filtered.size(); i += decim)
        out.samples.push_back(filtered[i]);
    return out;
}

}  // namespace loadfsk
