#include "loadfsk/crc8.hpp"

namespace loadfsk {

static constexpr std::uint8_t kPoly = 0x07;

std::uint8_t crc8(const Bits& bits) {
    std::uint8_t reg = 0x00;
    for (std::uint8_t bit : bits) {
        const bool feedback = ((reg >> 7) & 1u) ^ (bit & 1u);
        reg = static_cast<std::uint8_t>(reg << 1);
        if (feedback)
            reg ^= kPoly;
    }
    return reg;
}

}  // namespace loadfsk
