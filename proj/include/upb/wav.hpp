// Copyright 2026 The UPB Toolkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "upb/types.hpp"

namespace upb {

enum class SampleFormat { kPcm16, kFloat32 };

struct WavAudio {
  std::vector<double> samples;
  int sample_rate = 0;
  SampleFormat format = SampleFormat::kPcm16;
};

// Mono RIFF/WAVE, 16-bit PCM or 32-bit IEEE float (plain or extensible fmt).
// Multi-channel files and other encodings throw kFormat; unreadable files kIo.
WavAudio read_wav(const std::filesystem::path& path);

// PCM16 scales by 32768 and clamps, so read_wav/write_wav round-trips
// 16-bit files byte-for-byte.
void write_wav(const std::filesystem::path& path, std::span<const double> samples, int sample_rate,
               SampleFormat format);

}  // namespace upb
