// Copyright 2026 The UPB Toolkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "upb/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

namespace upb {

namespace {

double clamp_db(double db) {
  if (std::isnan(db)) return kSnrFloorDb;
  return std::clamp(db, kSnrFloorDb, kSnrCeilDb);
}

// 10*log10(signal/noise) with the degenerate ratios pinned to the clamp.
double ratio_db(double signal, double noise) {
  if (noise <= 0.0) return kSnrCeilDb;
  if (signal <= 0.0) return kSnrFloorDb;
  return clamp_db(10.0 * std::log10(signal / noise));
}

void require_same_length(const Waveform& a, const Waveform& b, const char* what) {
  if (a.size() != b.size())
    throw Error(ErrorCode::kShapeMismatch, std::string(what) + ": length mismatch (" +
                                               std::to_string(a.size()) + " vs " +
                                               std::to_string(b.size()) + ")");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

double segsnr(const Waveform& ref, const Waveform& est, double frame_ms) {
  require_same_length(ref, est, "segsnr");
  if (!(frame_ms > 0.0)) throw Error(ErrorCode::kInvalidArgument, "segsnr: frame_ms must be > 0");
  const auto frame = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(frame_ms * 1e-3 * ref.sample_rate())));
  double total = 0.0;
  std::size_t counted = 0;
  for (std::size_t start = 0; start < ref.size(); start += frame) {
    const std::size_t end = std::min(ref.size(), start + frame);
    double sig = 0.0, noise = 0.0;
    for (std::size_t i = start; i < end; ++i) {
      const double e = ref[i] - est[i];
      sig += ref[i] * ref[i];
      noise += e * e;
    }
    if (sig <= 1e-10) continue;
    total += ratio_db(sig, noise);
    ++counted;
  }
  if (counted == 0) throw Error(ErrorCode::kSilentReference, "segsnr: silent reference");
  return total / static_cast<double>(counted);
}

double sisnr(const Waveform& ref, const Waveform& est) {
  require_same_length(ref, est, "sisnr");
  const double n = static_cast<double>(ref.size());
  double mr = 0.0, me = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    mr += ref[i];
    me += est[i];
  }
  mr /= n;
  me /= n;
  double dot = 0.0, rr = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    dot += (ref[i] - mr) * (est[i] - me);
    rr += (ref[i] - mr) * (ref[i] - mr);
  }
  if (rr <= 1e-10) throw Error(ErrorCode::kSilentReference, "sisnr: silent reference");
  const double alpha = dot / rr;
  double target = 0.0, noise = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double s = alpha * (ref[i] - mr);
    const double e = (est[i] - me) - s;
    target += s * s;
    noise += e * e;
  }
  return ratio_db(target, noise);
}

double mag_spec_rel_err(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.same_shape(b)) throw Error(ErrorCode::kShapeMismatch, "mag_spec_rel_err: shape mismatch");
  double diff = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ma = std::abs(a.data()[i]);
    const double d = ma - std::abs(b.data()[i]);
    diff += d * d;
    ref += ma * ma;
  }
  return std::sqrt(diff) / std::max(std::sqrt(ref), 1e-12);
}

double normalize_pesq(double pesq) {
  if (!(pesq >= -0.5 && pesq <= 4.5))
    throw Error(ErrorCode::kOutOfRange, "PESQ score " + std::to_string(pesq) + " outside [-0.5, 4.5]");
  return (pesq - 1.0) / 3.65;
}

std::map<std::string, double> ingest_external_pesq(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::kIo, "cannot open PESQ file " + file.string());
  std::map<std::string, double> scores;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    const std::string_view s = trim(line);
    if (s.empty()) continue;
    const auto where = "PESQ file " + file.string() + " line " + std::to_string(lineno);
    const auto comma = s.find(',');
    if (comma == std::string_view::npos || s.find(',', comma + 1) != std::string_view::npos)
      throw Error(ErrorCode::kFormat, where + ": expected 'clip_id,score'");
    const std::string_view id = trim(s.substr(0, comma));
    const std::string_view num = trim(s.substr(comma + 1));
    double score = 0.0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), score);
    if (id.empty() || ec != std::errc() || ptr != num.data() + num.size())
      throw Error(ErrorCode::kFormat, where + ": malformed entry '" + std::string(s) + "'");
    if (!(score >= -0.5 && score <= 4.5))
      throw Error(ErrorCode::kOutOfRange, where + ": score outside [-0.5, 4.5]");
    if (!scores.emplace(std::string(id), score).second)
      throw Error(ErrorCode::kFormat, where + ": duplicate clip id '" + std::string(id) + "'");
  }
  return scores;
}

}  // namespace upb
