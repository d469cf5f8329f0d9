#pragma once

#include <cstdint>

#include "loadfsk/bits.hpp"

namespace loadfsk {

// CRC-8 over a bit stream: polynomial x^8 + x^2 + x + 1 (0x07), initial
// register 0x00, no input/output reflection, no final XOR. Operates bit
// by bit, so inputs of any length (not only whole bytes) are defined.
std::uint8_t crc8(const Bits& bits);

}  // namespace loadfsk
