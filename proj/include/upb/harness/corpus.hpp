// Copyright 2026 The UPB Toolkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "upb/harness/handles.hpp"

namespace upb::harness {

inline constexpr int kCorpusSampleRate = 16000;

struct ClipEntry {
  std::string clip_id;  // file stem, unique within a corpus
  std::filesystem::path path;
  double duration = 0.0;  // seconds
  int sample_rate = 0;
  upb_sample_format format = UPB_SAMPLE_PCM16;
};

struct Corpus {
  std::vector<ClipEntry> clips;       // sorted by clip_id
  std::vector<std::string> warnings;  // one per skipped file
};

// Every *.wav directly inside dir. Unreadable, multi-channel or off-rate
// (unless allow_any_rate) files are skipped with a warning. Throws
// std::runtime_error when no usable clip remains.
Corpus scan_corpus(const std::filesystem::path& dir, bool allow_any_rate = false);

WaveformPtr load_clip(const ClipEntry& clip);

// UPB_SEED, when set to an unsigned integer, wins over the command-line seed.
std::uint64_t resolve_seed(std::uint64_t cli_seed);

}  // namespace upb::harness
