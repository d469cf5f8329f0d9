#include "loadfsk/wav_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <memory>
#include <stdexcept>
#include <vector>

namespace loadfsk {

namespace {

struct FileCloser {
    void operator()(FILE* f) const {
        if (f)
            std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 24));
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
    out.insert(out.end(), tag, tag + 4);
}

std::uint32_t get_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t get_u16(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

}  // namespace

void write_wav(const std::string& path, const Waveform& w) {
    const auto n = static_cast<std::uint32_t>(w.samples.size());
    const std::uint32_t data_bytes = n * 2;
    const auto rate = static_cast<std::uint32_t>(std::llround(w.sample_rate));

    std::vector<std::uint8_t> out;
    out.reserve(44 + data_bytes);
    put_tag(out, "RIFF");
    put_u32(out, 36 + data_bytes);
    put_tag(out, "WAVE");
    put_tag(out, "fmt ");
    put_u32(out, 16);
    put_u16(out, 1);  // PCM
    put_u16(out, 1);  // mono
    put_u32(out, rate);
    put_u32(out, rate * 2);  // byte rate
    put_u16(out, 2);         // block align
    put_u16(out, 16);        // bits per sample
    put_tag(out, "data");
    put_u32(out, data_bytes);
    for (float v : w.samples) {
        const float c = std::clamp(v, -1.0f, 1.0f);
        const auto q = static_cast<std::int16_t>(std::lround(c * 32767.0f));
        put_u16(out, static_cast<std::uint16_t>(q));
    }

    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f)
        throw std::runtime_error("cannot open for writing: " + path);
    if (std::fwrite(out.data(), 1, out.size(), f.get()) != out.size())
        throw std::runtime_error("short write: " + path);
}

Waveform read_wav(const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f)
        throw std::runtime_error("cannot open for reading: " + path);

    std::uint8_t riff[12];
    if (std::fread(riff, 1, 12, f.get()) != 12 || std::memcmp(riff, "RIFF", 4) != 0 ||
        std::memcmp(riff + 8, "WAVE", 4) != 0)
        throw std::runtime_error("not a RIFF/WAVE file: " + path);

    std::uint32_t sample_rate = 0;
    std::uint16_t channels = 0, bits = 0, format = 0;
    std::vector<std::uint8_t> data;
    bool have_fmt = false, have_data = false;

    std::uint8_t ch[8];
    while (std::fread(ch, 1, 8, f.get()) == 8) {
        const std::uint32_t len = get_u32(ch + 4);
        std::vector<std::uint8_t> body(len);
        if (len > 0 && std::fread(body.data(), 1, len, f.get()) != len)
            throw std::runtime_error("truncated chunk: " + path);
        if (std::memcmp(ch, "fmt ", 4) == 0 && len >= 16) {
            format = get_u16(body.data());
            channels = get_u16(body.data() + 2);
            sample_rate = get_u32(body.data() + 4);
            bits = get_u16(body.data() + 14);
            have_fmt = true;
        } else if (std::memcmp(ch, "data", 4) == 0) {
            data = std::move(body);
            have_data = true;
        }
        if (len % 2 == 1)
            std::fseek(f.get(), 1, SEEK_CUR);  // chunk padding
    }

    if (!have_fmt || !have_data)
        throw std::runtime_error("missing fmt/data chunk: " + path);
    if (format != 1 || bits != 16)
        throw std::runtime_error("only 16-bit PCM WAV is supported: " + path);
    if (channels != 1)
        throw std::runtime_error("only mono WAV is supported: " + path);

    Waveform w;
    w.sample_rate = sample_rate;
    w.samples.resize(data.size() / 2);
    for (std::size_t i = 0; i < w.samples.size(); ++i) {
        const auto q = static_cast<std::int16_t>(get_u16(data.data() + 2 * i));
        w.samples[i] = static_cast<float>(q) / 32767.0f;
    }
    return w;
}

void write_raw_f32(const std::string& path, const Waveform& w) {
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f)
        throw std::runtime_error("cannot open for writing: " + path);
    static_assert(sizeof(float) == 4);
    if (!w.samples.empty() &&
        std::fwrite(w.samples.data(), 4, w.samples.size(), f.get()) != w.samples.size())
        throw std::runtime_error("short write: " + path);

    FilePtr meta(std::fopen((path + ".meta").c_str(), "w"));
    if (!meta)
        throw std::runtime_error("cannot write sidecar: " + path + ".meta");
    std::fprintf(meta.get(), "sample_rate=%.0f\n", w.sample_rate);
}

Waveform read_raw_f32(const std::string& path) {
    FilePtr meta(std::fopen((path + ".meta").c_str(), "r"));
    if (!meta)
        throw std::runtime_error("missing sidecar: " + path + ".meta");
    double rate = 0.0;
    if (std::fscanf(meta.get(), "sample_rate=%lf", &rate) != 1 || rate <= 0.0)
        throw std::runtime_error("malformed sidecar: " + path + ".meta");

    FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f)
        throw std::runtime_error("cannot open for reading: " + path);
    std::fseek(f.get(), 0, SEEK_END);
    const long bytes = std::ftell(f.get());
    std::fseek(f.get(), 0, SEEK_SET);

    Waveform w;
    w.sample_rate = rate;
    w.samples.resize(static_cast<std::size_t>(bytes) / 4);
    if (!w.samples.empty() &&
        std::fread(w.samples.data(), 4, w.samples.size(), f.get()) != w.samples.size())
        throw std::runtime_error("short read: " + path);
    return w;
}

}  // namespace loadfsk
