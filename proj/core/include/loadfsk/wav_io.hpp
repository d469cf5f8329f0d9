#pragma once

#include <string>

#include "loadfsk/waveform.hpp"

namespace loadfsk {

// Mono 16-bit PCM. Samples are clipped to [-1, 1] before quantization.
void write_wav(const std::string& path, const Waveform& w);
Waveform read_wav(const std::string& path);

// Raw 32-bit float little-endian with a "<path>.meta" sidecar holding
// "sample_rate=<hz>".
void write_raw_f32(const std::string& path, const Waveform& w);
Waveform read_raw_f32(const std::string& path);

}  // namespace loadfsk
