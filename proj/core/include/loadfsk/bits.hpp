#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace loadfsk {

/// A bit vector, one bit per element, values restricted to 0/1.
using Bits = std::vector<std::uint8_t>;

/// Expand bytes to bits, MSB of each byte first.
Bits bytes_to_bits(const std::vector<std::uint8_t>& bytes);

/// Pack bits into bytes, MSB-first. Trailing pad bits are zero.
std::vector<std::uint8_t> bits_to_bytes(const Bits& bits);

/// Append `width` bits of `value`, MSB first.
void append_uint(Bits& bits, std::uint64_t value, int width);

/// Read `width` bits starting at `pos` as an MSB-first unsigned value.
std::uint64_t read_uint(const Bits& bits, std::size_t pos, int width);

// File format: one text header line "bits=<count>\n" followed by the
// packed bytes, MSB-first, trailing pad bits zero.
void write_bits_file(const std::string& path, const Bits& bits);
Bits read_bits_file(const std::string& path);

}  // namespace loadfsk
