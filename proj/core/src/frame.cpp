#include "loadfsk/frame.hpp"

#include <stdexcept>

#include "loadfsk/crc8.hpp"

namespace loadfsk {

Bits preamble_bits() {
    return {1, 0, 1, 0, 1, 0, 1, 0};
}

std::size_t frame_bit_length(const FrameMode& mode, std::size_t payload_bits) {
    const std::size_t base = kPreambleBits + payload_bits + kCrcBits;
    return mode.kind == FrameMode::Kind::Dynamic ? base + kLengthFieldBits : base;
}

Bits encode_frame(const Bits& payload, const FrameMode& mode) {
    if (mode.kind == FrameMode::Kind::Static) {
        if (mode.static_size < 1)
            throw std::invalid_argument("static frame size must be >= 1 bit");
        if (payload.size() != mode.static_size)
            throw std::invalid_argument("static payload must be exactly the configured size");
    } else if (payload.size() > kMaxDynamicPayloadBits) {
        throw std::invalid_argument("dynamic payload exceeds 65535 bits");
    }

    Bits frame = preamble_bits();
    Bits covered;  // the bits the CRC is computed over
    if (mode.kind == FrameMode::Kind::Dynamic)
        append_uint(covered, payload.size(), kLengthFieldBits);
    covered.insert(covered.end(), payload.begin(), payload.end());

    frame.insert(frame.end(), covered.begin(), covered.end());
    append_uint(frame, crc8(covered), kCrcBits);
    return frame;
}

DecodedFrame decode_frame(const Bits& bits, const FrameMode& mode) {
    DecodedFrame result;
    if (bits.size() < kPreambleBits) {
        result.status = FrameStatus::Truncated;
        return result;
    }
    const Bits pre = preamble_bits();
    for (std::size_t i = 0; i < kPreambleBits; ++i) {
        if (bits[i] != pre[i]) {
            result.status = FrameStatus::BadPreamble;
            return result;
        }
    }

    std::size_t pos = kPreambleBits;
    std::size_t payload_len = 0;
    if (mode.kind == FrameMode::Kind::Dynamic) {
        if (bits.size() < pos + kLengthFieldBits) {
            result.status = FrameStatus::Truncated;
            return result;
        }
        payload_len = static_cast<std::size_t>(read_uint(bits, pos, kLengthFieldBits));
        pos += kLengthFieldBits;
    } else {
        payload_len = mode.static_size;
    }

    if (bits.size() < pos + payload_len + kCrcBits) {
        result.status = FrameStatus::Truncated;
        return result;
    }

    Bits covered;
    if (mode.kind == FrameMode::Kind::Dynamic)
        append_uint(covered, payload_len, kLengthFieldBits);
    covered.insert(covered.end(), bits.begin() + static_cast<std::ptrdiff_t>(pos),
                   bits.begin() + static_cast<std::ptrdiff_t>(pos + payload_len));

    const auto received_crc = static_cast<std::uint8_t>(read_uint(bits, pos + payload_len, kCrcBits));
    result.payload.assign(bits.begin() + static_cast<std::ptrdiff_t>(pos),
                          bits.begin() + static_cast<std::ptrdiff_t>(pos + payload_len));
    result.status = (crc8(covered) == received_crc) ? FrameStatus::Ok : FrameStatus::CrcMismatch;
    return result;
}

}  // namespace loadfsk
