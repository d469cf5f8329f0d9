#include "loadfsk/bits.hpp"

#include <cstdio>
#include <stdexcept>

namespace loadfsk {

Bits bytes_to_bits(const std::vector<std::uint8_t>& bytes) {
    Bits out;
    out.reserve(bytes.size() * 8);
    for (std::uint8_t byte : bytes)
        for (int i = 7; i >= 0; --i)
            out.push_back(static_cast<std::uint8_t>((byte >> i) & 1u));
    return out;
}

std::vector<std::uint8_t> bits_to_bytes(const Bits& bits) {
    std::vector<std::uint8_t> out((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i])
            out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    return out;
}

void append_uint(Bits& bits, std::uint64_t value, int width) {
    for (int i = width - 1; i >= 0; --i)
        bits.push_back(static_cast<std::uint8_t>((value >> i) & 1u));
}

std::uint64_t read_uint(const Bits& bits, std::size_t pos, int width) {
    if (pos + static_cast<std::size_t>(width) > bits.size())
        throw std::out_of_range("read_uint: past end of bit vector");
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i)
        v = (v << 1) | bits[pos + static_cast<std::size_t>(i)];
    return v;
}

void write_bits_file(const std::string& path, const Bits& bits) {
    FILE* f = std::fopen(path.c_str(), "wb");
    if (!f)
        throw std::runtime_error("cannot open for writing: " + path);
    std::fprintf(f, "bits=%zu\n", bits.size());
    const auto bytes = bits_to_bytes(bits);
    if (!bytes.empty() && std::fwrite(bytes.data(), 1, bytes.size(), f) != bytes.size()) {
        std::fclose(f);
        throw std::runtime_error("short write: " + path);
    }
    std::fclose(f);
}

Bits read_bits_file(const std::string& path) {
    FILE* f = std::fopen(path.c_str(), "rb");
    if (!f)
        throw std::runtime_error("cannot open for reading: " + path);
    char header[64];
    if (!std::fgets(header, sizeof header, f)) {
        std::fclose(f);
        throw std::runtime_error("missing bits= header: " + path);
    }
    std::size_t count = 0;
    if (std::sscanf(header, "bits=%zu", &count) != 1) {
        std::fclose(f);
        throw std::runtime_error("malformed bits= header: " + path);
    }
    std::vector<std::uint8_t> bytes((count + 7) / 8);
    if (!bytes.empty() && std::fread(bytes.data(), 1, bytes.size(), f) != bytes.size()) {
        std::fclose(f);
        throw std::runtime_error("truncated bit file: " + path);
    }
    std::fclose(f);
    Bits all = bytes_to_bits(bytes);
    all.resize(count);
    return all;
}

}  // namespace loadfsk
