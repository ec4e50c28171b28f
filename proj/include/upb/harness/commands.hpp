// Copyright 2026 The UPB Toolkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "upb/harness/reports.hpp"
#include "upb/upb.h"

namespace upb::harness {

namespace fs = std::filesystem;

// STFT parameters with the sample rate filled in per clip.
struct StftParams {
  std::size_t frame_length = 400;
  std::size_t hop = 100;
  std::size_t fft_size = 512;
  upb_window_kind window = UPB_WINDOW_HAMMING;

  upb_stft_config for_rate(int sample_rate) const {
    return {frame_length, hop, fft_size, window, sample_rate};
  }
};

struct CorpusOptions {
  fs::path corpus_dir;
  bool allow_any_rate = false;
  StftParams stft;
};

// istft(stft(x)) vs x for every clip. Writes report (JSON) and its .txt table.
MetricsSummary cmd_roundtrip(const CorpusOptions& opts, const fs::path& report, std::ostream& log);

struct BiasOptions {
  CorpusOptions corpus;
  fs::path out_dir;
  std::uint64_t seed = 0;
  std::optional<double> theta;  // fixed bias for every clip instead of a random draw
};

// Per clip: theta ~ U[-pi, pi) from sub-stream i of the seed, biased
// reconstruction written to out_dir/<clip>.wav (float32), metrics to
// out_dir/report.json and report.txt.
MetricsSummary cmd_bias(const BiasOptions& opts, std::ostream& log);

struct LossOptions {
  fs::path clean_wav;
  fs::path est_wav;
  std::optional<fs::path> weights_file;
  std::vector<double> adv_scores;      // D(M, M_hat) for L_adv
  std::vector<double> upb_adv_scores;  // D(A, A_hat) for L_upb-adv
  StftParams stft;
};

struct CompositeValue {
  std::string name;
  std::optional<double> value;
  std::string missing;  // reason when value is absent
};

struct LossSummary {
  upb_loss_weights weights{};
  std::array<std::optional<double>, UPB_TERM_COUNT> terms;
  std::vector<CompositeValue> composites;  // L_ori, L1, L2, L3
};

// Weights JSON: {"lambda": [7 numbers], "c": number}; both keys optional.
upb_loss_weights load_weights(const std::optional<fs::path>& file);

LossSummary cmd_loss(const LossOptions& opts);
nlohmann::ordered_json to_json(const LossSummary& s);
std::string to_table(const LossSummary& s);

struct AugmentOptions {
  CorpusOptions corpus;
  fs::path out_dir;
  std::optional<fs::path> config_file;
  std::optional<std::uint64_t> seed;  // overrides rng_seed from the config file
};

struct AugmentSummary {
  std::size_t clip_count = 0;
  std::array<double, 3> frequencies{};  // global, linear, magnoise
  std::vector<std::pair<std::string, upb_augment_record>> records;
};

// Config JSON keys (all optional): p_global, p_linear, p_magnoise,
// noise_variance, rng_seed.
upb_augment_config load_augment_config(const std::optional<fs::path>& file);

// Clips with no augmentation drawn are copied byte-for-byte.
AugmentSummary cmd_augment(const AugmentOptions& opts, std::ostream& log);
nlohmann::ordered_json to_json(const upb_augment_record& r);

struct AbxGenOptions {
  CorpusOptions corpus;
  fs::path out_dir;
  std::size_t n_trials = 100;
  std::uint64_t seed = 0;
};

// Writes out_dir/manifest.json (ground truth) and
// out_dir/audio/<trial_id>/{x,a,b}.wav. Returns the manifest.
nlohmann::ordered_json cmd_abx_gen(const AbxGenOptions& opts, std::ostream& log);

struct DiscInputSummary {
  std::size_t frames = 0;
  std::size_t bins = 0;
};

// Dumps the 3 x T x F discriminator input of one clip (see tensor_file.hpp).
DiscInputSummary cmd_disc_input(const fs::path& wav, const fs::path& out, const StftParams& stft,
                                bool allow_any_rate);

}  // namespace upb::harness
