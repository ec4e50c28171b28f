// Copyright 2026 The UPB Toolkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace upb::harness {

struct ClipMetrics {
  std::string clip_id;
  double segsnr_db = 0.0;
  double sisnr_db = 0.0;
  std::optional<double> theta;
  // |biased spectrogram| vs |stft(x)|
  std::optional<double> mag_rel_err;
  // |stft(reconstruction)| vs |stft(x)|
  std::optional<double> resynth_mag_rel_err;
};

struct MetricsSummary {
  std::string experiment;  // "roundtrip" or "bias"
  std::vector<ClipMetrics> clips;

  double mean_segsnr() const;
  double mean_sisnr() const;
};

nlohmann::ordered_json to_json(const MetricsSummary& s);

// Fixed-width table in the Signal | SegSNR | SiSNR layout, one row per clip
// followed by the mean row.
std::string to_table(const MetricsSummary& s);

// Writes <path> (JSON) and <path with .txt extension> (table).
void write_report(const MetricsSummary& s, const std::filesystem::path& json_path);

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j);

}  // namespace upb::harness
