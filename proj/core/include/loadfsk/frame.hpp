#pragma once

#include <cstddef>
#include <cstdint>

#include "loadfsk/bits.hpp"

namespace loadfsk {

/// The fixed 8-bit alternating calibration preamble 1,0,1,0,1,0,1,0.
Bits preamble_bits();

inline constexpr std::size_t kPreambleBits = 8;
inline constexpr std::size_t kLengthFieldBits = 16;
inline constexpr std::size_t kCrcBits = 8;
inline constexpr std::size_t kMaxDynamicPayloadBits = 65535;

struct FrameMode {
    enum class Kind { Static, Dynamic };
    Kind kind = Kind::Dynamic;
    std::size_t static_size = 32;  // payload bit count in static mode, >= 1

    static FrameMode dynamic() { return {Kind::Dynamic, 32}; }
    static FrameMode fixed(std::size_t size) { return {Kind::Static, size}; }
};

/// Total frame length in bits for a given payload size.
/// Static: 8 preamble + static_size + 8 CRC. Dynamic adds a 16-bit length field.
std::size_t frame_bit_length(const FrameMode& mode, std::size_t payload_bits);

// Frame layout: preamble ++ [16-bit big-endian length] ++ payload ++ crc8.
// In dynamic mode the CRC covers length field plus payload; in static mode
// it covers the payload alone.
Bits encode_frame(const Bits& payload, const FrameMode& mode);

enum class FrameStatus { Ok, CrcMismatch, Truncated, BadPreamble };

struct DecodedFrame {
    FrameStatus status = FrameStatus::Ok;
    Bits payload;  // received payload bits; trustworthy only when status == Ok

    bool ok() const { return status == FrameStatus::Ok; }
};

/// Decode a frame starting at bits[0]. Returns the payload iff the
/// recomputed CRC matches; CrcMismatch/Truncated/BadPreamble otherwise.
DecodedFrame decode_frame(const Bits& bits, const FrameMode& mode);

}  // namespace loadfsk
