// Copyright 2026 The UPB Toolkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "upb/spectral.hpp"

namespace upb {

inline constexpr double kSnrFloorDb = -10.0;
inline constexpr double kSnrCeilDb = 35.0;

struct MetricsReport {
  double segsnr_db = 0.0;
  double sisnr_db = 0.0;
  double mag_rel_err = 0.0;
  std::optional<double> pesq_raw;
  std::optional<double> q_pesq;
};

// Non-overlapping frames of frame_ms; each frame's SNR is clamped to
// [-10, 35] dB and frames whose reference energy is <= 1e-10 are skipped.
// A trailing partial frame counts as a frame.
double segsnr(const Waveform& ref, const Waveform& est, double frame_ms = 32.0);

// Scale-invariant SNR on mean-removed signals, clamped to [-10, 35] dB.
double sisnr(const Waveform& ref, const Waveform& est);

// || |a| - |b| ||_F / max(|| |a| ||_F, 1e-12)
double mag_spec_rel_err(const ComplexMatrix& a, const ComplexMatrix& b);

// (pesq - 1) / 3.65, pesq in [-0.5, 4.5].
double normalize_pesq(double pesq);

// Reads `clip_id,score` lines. Blank lines are ignored; anything else that
// does not parse, or a score outside [-0.5, 4.5], throws kFormat/kOutOfRange
// naming the 1-based line number.
std::map<std::string, double> ingest_external_pesq(const std::filesystem::path& file);

}  // namespace upb
