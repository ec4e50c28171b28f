// Copyright 2026 The UPB Toolkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "upb/harness/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace upb::harness {

namespace fs = std::filesystem;

Corpus scan_corpus(const fs::path& dir, bool allow_any_rate) {
  if (!fs::is_directory(dir)) throw std::runtime_error("corpus directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::string ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".wav") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());

  Corpus corpus;
  for (const fs::path& p : files) {
    upb_waveform* raw = nullptr;
    upb_sample_format fmt = UPB_SAMPLE_PCM16;
    if (upb_wav_read(p.string().c_str(), &raw, &fmt) != UPB_OK) {
      corpus.warnings.push_back("skipping " + p.filename().string() + ": " + upb_last_error());
      continue;
    }
    WaveformPtr w(raw);
    const int rate = upb_waveform_sample_rate(w.get());
    if (!allow_any_rate && rate != kCorpusSampleRate) {
      corpus.warnings.push_back("skipping " + p.filename().string() + ": sample rate " +
                                std::to_string(rate) + " Hz (expected 16000; use --allow-any-rate)");
      continue;
    }
    corpus.clips.push_back({p.stem().string(), p,
                            static_cast<double>(upb_waveform_length(w.get())) / rate, rate, fmt});
  }
  if (corpus.clips.empty()) throw std::runtime_error("empty corpus: no readable WAV files in " + dir.string());
  return corpus;
}

WaveformPtr load_clip(const ClipEntry& clip) { return read_wav(clip.path.string()); }

std::uint64_t resolve_seed(std::uint64_t cli_seed) {
  const char* env = std::getenv("UPB_SEED");
  if (env == nullptr || *env == '\0') return cli_seed;
  std::uint64_t v = 0;
  const char* end = env + std::strlen(env);
  const auto [ptr, ec] = std::from_chars(env, end, v);
  if (ec != std::errc() || ptr != end) throw std::runtime_error(std::string("UPB_SEED is not an unsigned integer: ") + env);
  return v;
}

}  // namespace upb::harness
