#include <stdexcept>
#include <random>

#include "doctest.h"
#include "loadfsk/bits.hpp"
#include "loadfsk/crc8.hpp"
#include "loadfsk/frame.hpp"

using namespace loadfsk;

namespace {
Bits random_bits(std::size_t n, std::uint32_t seed) {
    std::mt19937 rng(seed);
    Bits b(n);
    for (auto& x : b)
        x = static_cast<std::uint8_t>(rng() & 1u);
    return b;
}
}  // namespace

TEST_CASE("static 32-bit payload gives a 48-bit frame") {
    const Bits frame = encode_frame(random_bits(32, 1), FrameMode::fixed(32));
    CHECK(frame.size() == 48);
    CHECK(frame_bit_length(FrameMode::fixed(32), 32) == 48);
}

TEST_CASE("dynamic 40-bit payload gives a 72-bit frame with big-endian length 0x0028") {
    const Bits frame = encode_frame(random_bits(40, 2), FrameMode::dynamic());
    CHECK(frame.size() == 72);
    CHECK(read_uint(frame, kPreambleBits, 16) == 0x0028);
}

TEST_CASE("empty dynamic payload gives a 32-bit frame with CRC over 16 zero bits") {
    const Bits frame = encode_frame({}, FrameMode::dynamic());
    CHECK(frame.size() == 32);
    CHECK(read_uint(frame, 8, 16) == 0);
    CHECK(read_uint(frame, 24, 8) == crc8(Bits(16, 0)));
}

TEST_CASE("frame starts with the alternating preamble") {
    const Bits frame = encode_frame(random_bits(16, 3), FrameMode::dynamic());
    for (std::size_t i = 0; i < 8; ++i)
        CHECK(frame[i] == (i % 2 == 0 ? 1 : 0));
}

TEST_CASE("decode(encode(p)) == p for random payloads in both modes") {
    for (std::uint32_t seed = 0; seed < 50; ++seed) {
        const std::size_t n = seed * 13 % 200;
        const Bits p = random_bits(n, 100 + seed);
        const auto dyn = decode_frame(encode_frame(p, FrameMode::dynamic()), FrameMode::dynamic());
        REQUIRE(dyn.ok());
        CHECK(dyn.payload == p);

        const FrameMode st = FrameMode::fixed(n == 0 ? 1 : n);
        const Bits sp = random_bits(st.static_size, 200 + seed);
        const auto dec = decode_frame(encode_frame(sp, st), st);
        REQUIRE(dec.ok());
        CHECK(dec.payload == sp);
    }
}

TEST_CASE("one flipped payload bit is always caught") {
    const Bits p = random_bits(32, 5);
    Bits frame = encode_frame(p, FrameMode::fixed(32));
    for (std::size_t i = kPreambleBits; i < frame.size(); ++i) {
        Bits corrupted = frame;
        corrupted[i] ^= 1;
        CHECK(decode_frame(corrupted, FrameMode::fixed(32)).status == FrameStatus::CrcMismatch);
    }
}

TEST_CASE("dynamic frame claiming more payload than present is truncated") {
    Bits frame = encode_frame(random_bits(50, 6), FrameMode::dynamic());
    // Rewrite the length field to claim 100 bits.
    Bits fake;
    append_uint(fake, 100, 16);
    for (int i = 0; i < 16; ++i)
        frame[kPreambleBits + static_cast<std::size_t>(i)] = fake[static_cast<std::size_t>(i)];
    CHECK(decode_frame(frame, FrameMode::dynamic()).status == FrameStatus::Truncated);
}

TEST_CASE("garbled preamble is rejected") {
    Bits frame = encode_frame(random_bits(32, 7), FrameMode::dynamic());
    frame[0] ^= 1;
    CHECK(decode_frame(frame, FrameMode::dynamic()).status == FrameStatus::BadPreamble);
}

TEST_CASE("encode rejects invalid payload sizes") {
    CHECK_THROWS_AS((void)encode_frame(random_bits(31, 8), FrameMode::fixed(32)),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)encode_frame(random_bits(65536, 9), FrameMode::dynamic()),
                    std::invalid_argument);
}

TEST_CASE("exhaustive burst error detection on 48-bit static frames") {
    // CRC-8 with poly 0x07 (constant term set) detects every burst of
    // length <= 8 anywhere in the codeword. Linearity (checked in the CRC
    // tests) makes detection depend only on the error pattern, so the
    // exhaustive sweep runs on a handful of payloads.
    const FrameMode mode = FrameMode::fixed(32);
    std::size_t patterns = 0;
    for (std::uint32_t seed : {0u, 1u, 2u}) {
        const Bits p = random_bits(32, 300 + seed);
        const Bits frame = encode_frame(p, mode);
        for (std::size_t start = kPreambleBits; start < 48; ++start) {
            for (std::size_t len = 1; len <= 8 && start + len <= 48; ++len) {
                // All interior patterns; first and last burst bits are set.
                const std::size_t interiors = len >= 2 ? (std::size_t{1} << (len - 2)) : 1;
                for (std::size_t pat = 0; pat < interiors; ++pat) {
                    Bits corrupted = frame;
                    corrupted[start] ^= 1;
                    if (len >= 2)
                        corrupted[start + len - 1] ^= 1;
                    for (std::size_t j = 0; j + 2 < len; ++j)
                        if ((pat >> j) & 1u)
                            corrupted[start + 1 + j] ^= 1;
                    const auto result = decode_frame(corrupted, mode);
                    CHECK(result.status == FrameStatus::CrcMismatch);
                    ++patterns;
                }
            }
        }
    }
    CHECK(patterns > 10000);  // the sweep actually ran
}
