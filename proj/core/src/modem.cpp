#include "loadfsk/modem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace loadfsk {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_pow2(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

std::size_t log2_exact(std::size_t n) {
    std::size_t k = 0;
    while ((std::size_t{1} << k) < n)
        ++k;
    return k;
}
}  // namespace

std::size_t ModulationScheme::bits_per_symbol() const {
    if (kind == Kind::MultiCarrier)
        return 1;  // per subcarrier
    return log2_exact(tones.size());
}

std::size_t ModulationScheme::samples_per_symbol() const {
    return static_cast<std::size_t>(std::llround(bit_time * sample_rate));
}

std::vector<SubcarrierPair> ModulationScheme::subcarriers() const {
    if (kind != Kind::MultiCarrier || tones.size() % 2 != 0)
        throw std::logic_error("subcarriers() requires a MultiCarrier scheme");
    std::vector<SubcarrierPair> pairs;
    for (std::size_t i = 0; i + 1 < tones.size(); i += 2)
        pairs.push_back({tones[i], tones[i + 1]});
    return pairs;
}

double ModulationScheme::phase(std::size_t tone_index) const {
    return tone_index < phases.size() ? phases[tone_index] : 0.0;
}

void ModulationScheme::validate() const {
    if (tones.size() < 2)
        throw std::invalid_argument("scheme needs at least two tones");
    for (double f : tones) {
        if (!(f > 0.0) || f >= sample_rate / 2.0)
            throw std::invalid_argument("tone outside (0, Nyquist)");
    }
    auto sorted = tones;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("tones must be pairwise distinct");
    if (!(bit_time > 0.0))
        throw std::invalid_argument("bit time must be positive");

    if (kind == Kind::MFSK || kind == Kind::BFSK) {
        if (!is_pow2(tones.size()))
            throw std::invalid_argument("M-FSK order must be a power of two");
        if (kind == Kind::BFSK && tones.size() != 2)
            throw std::invalid_argument("B-FSK takes exactly two tones");
    } else {
        if (tones.size() % 2 != 0)
            throw std::invalid_argument("multi-carrier tones must come in pairs");
        // Frequency intervals of the pairs must not overlap.
        std::vector<std::pair<double, double>> spans;
        for (const auto& p : subcarriers())
            spans.emplace_back(std::min(p.f0, p.f1), std::max(p.f0, p.f1));
        std::sort(spans.begin(), spans.end());
        for (std::size_t i = 1; i < spans.size(); ++i)
            if (spans[i].first <= spans[i - 1].second)
                throw std::invalid_argument("subcarrier pairs overlap");
    }
}

ModulationScheme ModulationScheme::bfsk(double bit_rate, double sample_rate) {
    ModulationScheme s;
    s.kind = Kind::BFSK;
    s.tones = {5000.0, 8500.0};
    s.bit_time = 1.0 / bit_rate;
    s.sample_rate = sample_rate;
    return s;
}

ModulationScheme ModulationScheme::mfsk4(double bit_rate, double sample_rate) {
    ModulationScheme s;
    s.kind = Kind::MFSK;
    s.tones = {5000.0, 6500.0, 8000.0, 9500.0};
    s.bit_time = 2.0 / bit_rate;
    s.sample_rate = sample_rate;
    return s;
}

ModulationScheme ModulationScheme::multicarrier4(double bit_rate, double sample_rate) {
    ModulationScheme s;
    s.kind = Kind::MultiCarrier;
    s.tones = {5000.0, 5500.0, 6000.0, 6500.0, 7000.0, 7500.0, 8000.0, 8500.0};
    s.bit_time = 4.0 / bit_rate;
    s.sample_rate = sample_rate;
    return s;
}

double square_partial_sum(double freq_hz, double t, int n_terms) {
    if (!(freq_hz > 0.0))
        throw std::invalid_argument("square_partial_sum: frequency must be positive");
    if (n_terms < 1)
        throw std::invalid_argument("square_partial_sum: need at least one term");
    double acc = 0.0;
    for (int n = 1; n <= n_terms; ++n) {
        const double k = 2.0 * n - 1.0;
        acc += std::sin(kTwoPi * k * freq_hz * t) / k;
    }
    return acc * 4.0 / std::numbers::pi;
}

std::vector<int> bits_to_symbols(const Bits& bits, std::size_t order) {
    if (!is_pow2(order) || order < 2)
        throw std::invalid_argument("modulation order must be a power of two >= 2");
    const std::size_t k = log2_exact(order);
    if (bits.size() % k != 0)
        throw std::invalid_argument("bit count not divisible by bits per symbol");
    std::vector<int> symbols;
    symbols.reserve(bits.size() / k);
    for (std::size_t i = 0; i < bits.size(); i += k) {
        int sym = 0;
        for (std::size_t j = 0; j < k; ++j)
            sym = (sym << 1) | bits[i + j];
        symbols.push_back(sym);
    }
    return symbols;
}

Bits symbols_to_bits(const std::vector<int>& symbols, std::size_t order) {
    const std::size_t k = log2_exact(order);
    Bits bits;
    bits.reserve(symbols.size() * k);
    for (int sym : symbols)
        append_uint(bits, static_cast<std::uint64_t>(sym), static_cast<int>(k));
    return bits;
}

Waveform modulate_symbols(const std::vector<int>& symbols, const ModulationScheme& scheme,
                          WaveKind kind) {
    scheme.validate();
    const double fs = scheme.sample_rate;
    const double tb = scheme.bit_time;

    Waveform out;
    out.sample_rate = fs;
    if (symbols.empty())
        return out;

    // Boundaries rounded per symbol index, so no cumulative drift.
    const auto total = static_cast<std::size_t>(
        std::llround(static_cast<double>(symbols.size()) * tb * fs));
    out.samples.resize(total);

    for (std::size_t k = 0; k < symbols.size(); ++k) {
        const int sym = symbols[k];
        if (sym < 0 || static_cast<std::size_t>(sym) >= scheme.tones.size())
            throw std::invalid_argument("symbol index out of tone range");
        const double f = scheme.tones[static_cast<std::size_t>(sym)];
        const double phi = scheme.phase(static_cast<std::size_t>(sym));
        const auto start = static_cast<std::size_t>(std::llround(static_cast<double>(k) * tb * fs));
        const auto end = static_cast<std::size_t>(
            std::llround(static_cast<double>(k + 1) * tb * fs));
        for (std::size_t n = start; n < end && n < total; ++n) {
            const double t = static_cast<double>(n - start) / fs;
            if (kind == WaveKind::Sine) {
                out.samples[n] =
                    static_cast<float>(scheme.amplitude * std::cos(kTwoPi * f * t + phi));
            } else {
                double cycles = f * t + phi / kTwoPi;
                cycles -= std::floor(cycles);
                out.samples[n] = (cycles < 0.5) ? static_cast<float>(scheme.amplitude) : 0.0f;
            }
        }
    }
    return out;
}

Waveform modulate(const Bits& bits, const ModulationScheme& scheme, WaveKind kind) {
    if (scheme.kind == ModulationScheme::Kind::MultiCarrier)
        throw std::invalid_argument("use multicarrier_modulate for multi-carrier schemes");
    return modulate_symbols(bits_to_symbols(bits, scheme.order()), scheme, kind);
}

Waveform multicarrier_modulate(const std::vector<Bits>& streams,
                               const std::vector<SubcarrierPair>& subcarriers,
                               double bit_time, double sample_rate,
                               double amplitude, WaveKind kind) {
    if (streams.size() != subcarriers.size())
        throw std::invalid_argument("one bit stream per subcarrier required");
    ModulationScheme check;
    check.kind = ModulationScheme::Kind::MultiCarrier;
    for (const auto& p : subcarriers) {
        check.tones.push_back(p.f0);
        check.tones.push_back(p.f1);
    }
    check.bit_time = bit_time;
    check.sample_rate = sample_rate;
    check.amplitude = amplitude;
    check.validate();

    const std::size_t longest =
        streams.empty() ? 0
                        : std::max_element(streams.begin(), streams.end(),
                                           [](const Bits& a, const Bits& b) {
                                               return a.size() < b.size();
                                           })
                              ->size();

    Waveform sum;
    sum.sample_rate = sample_rate;
    for (std::size_t s = 0; s < streams.size(); ++s) {
        Bits padded = streams[s];
        padded.resize(longest, 0);

        ModulationScheme sub;
        sub.kind = ModulationScheme::Kind::BFSK;
        sub.tones = {subcarriers[s].f0, subcarriers[s].f1};
        sub.bit_time = bit_time;
        sub.sample_rate = sample_rate;
        sub.amplitude = amplitude;

        const Waveform w = modulate(padded, sub, kind);
        if (sum.samples.size() < w.samples.size())
            sum.samples.resize(w.samples.size(), 0.0f);
        for (std::size_t i = 0; i < w.samples.size(); ++i)
            sum.samples[i] += w.samples[i];
    }

    float peak = 0.0f;
    for (float v : sum.samples)
        peak = std::max(peak, std::abs(v));
    if (peak > 1.0f)
        for (float& v : sum.samples)
            v /= peak;
    return sum;
}

std::vector<int> frame_to_symbols(const Bits& frame_bits, std::size_t order) {
    if (frame_bits.size() < kPreambleBits)
        throw std::invalid_argument("frame shorter than the preamble");
    const std::size_t k = log2_exact(order);

    std::vector<int> symbols;
    for (std::size_t i = 0; i < kPreambleBits; ++i)
        symbols.push_back(frame_bits[i] ? static_cast<int>(order - 1) : 0);

    Bits body(frame_bits.begin() + kPreambleBits, frame_bits.end());
    while (body.size() % k != 0)
        body.push_back(0);
    const auto body_syms = bits_to_symbols(body, order);
    symbols.insert(symbols.end(), body_syms.begin(), body_syms.end());
    return symbols;
}

Waveform modulate_frame(const Bits& frame_bits, const ModulationScheme& scheme, WaveKind kind) {
    if (scheme.kind == ModulationScheme::Kind::MultiCarrier)
        throw std::invalid_argument("modulate_frame takes a single-carrier scheme");
    return modulate_symbols(frame_to_symbols(frame_bits, scheme.order()), scheme, kind);
}

Waveform modulate_payloads(const std::vector<Bits>& payloads, const FrameMode& mode,
                           const ModulationScheme& scheme, WaveKind kind,
                           std::size_t gap_samples) {
    scheme.validate();

    if (scheme.kind != ModulationScheme::Kind::MultiCarrier) {
        Waveform out;
        out.sample_rate = scheme.sample_rate;
        for (std::size_t i = 0; i < payloads.size(); ++i) {
            if (i > 0)
                out.append_silence(gap_samples);
            out.append(modulate_frame(encode_frame(payloads[i], mode), scheme, kind));
        }
        return out;
    }

    // Frame i rides subcarrier i mod n; all subcarriers share the symbol clock.
    const auto pairs = scheme.subcarriers();
    std::vector<Waveform> lanes(pairs.size());
    for (auto& lane : lanes)
        lane.sample_rate = scheme.sample_rate;

    for (std::size_t i = 0; i < payloads.size(); ++i) {
        const std::size_t lane_idx = i % pairs.size();
        ModulationScheme sub;
        sub.kind = ModulationScheme::Kind::BFSK;
        sub.tones = {pairs[lane_idx].f0, pairs[lane_idx].f1};
        sub.bit_time = scheme.bit_time;
        sub.sample_rate = scheme.sample_rate;
        sub.amplitude = scheme.amplitude;
        if (!lanes[lane_idx].empty())
            lanes[lane_idx].append_silence(gap_samples);
        lanes[lane_idx].append(modulate_frame(encode_frame(payloads[i], mode), sub, kind));
    }

    Waveform sum;
    sum.sample_rate = scheme.sample_rate;
    for (const auto& lane : lanes) {
        if (sum.samples.size() < lane.samples.size())
            sum.samples.resize(lane.samples.size(), 0.0f);
        for (std::size_t i = 0; i < lane.samples.size(); ++i)
            sum.samples[i] += lane.samples[i];
    }
    float peak = 0.0f;
    for (float v : sum.samples)
        peak = std::max(peak, std::abs(v));
    if (peak > 1.0f)
        for (float& v : sum.samples)
            v /= peak;
    return sum;
}

}  // namespace loadfsk
