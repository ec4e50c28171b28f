// Copyright 2026 The UPB Toolkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "upb/harness/reports.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace upb::harness {

namespace {

double mean_of(const std::vector<ClipMetrics>& clips, double ClipMetrics::*field) {
  if (clips.empty()) return 0.0;
  double s = 0.0;
  for (const auto& c : clips) s += c.*field;
  return s / static_cast<double>(clips.size());
}

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string pad(std::string s, std::size_t width, bool right) {
  if (s.size() >= width) return s;
  return right ? std::string(width - s.size(), ' ') + s : s + std::string(width - s.size(), ' ');
}

}  // namespace

double MetricsSummary::mean_segsnr() const { return mean_of(clips, &ClipMetrics::segsnr_db); }
double MetricsSummary::mean_sisnr() const { return mean_of(clips, &ClipMetrics::sisnr_db); }

nlohmann::ordered_json to_json(const MetricsSummary& s) {
  nlohmann::ordered_json j;
  j["experiment"] = s.experiment;
  j["clip_count"] = s.clips.size();
  auto& arr = j["clips"] = nlohmann::ordered_json::array();
  for (const auto& c : s.clips) {
    nlohmann::ordered_json r;
    r["clip_id"] = c.clip_id;
    if (c.theta) r["theta"] = *c.theta;
    r["segsnr_db"] = c.segsnr_db;
    r["sisnr_db"] = c.sisnr_db;
    if (c.mag_rel_err) r["mag_rel_err"] = *c.mag_rel_err;
    if (c.resynth_mag_rel_err) r["resynth_mag_rel_err"] = *c.resynth_mag_rel_err;
    arr.push_back(std::move(r));
  }
  j["mean"] = {{"segsnr_db", s.mean_segsnr()}, {"sisnr_db", s.mean_sisnr()}};
  return j;
}

std::string to_table(const MetricsSummary& s) {
  std::size_t w = 6;
  for (const auto& c : s.clips) w = std::max(w, c.clip_id.size());
  w += 2;
  std::string out;
  const std::string rule(w + 24, '-');
  out += pad("Signal", w, false) + pad("SegSNR", 12, true) + pad("SiSNR", 12, true) + "\n";
  out += rule + "\n";
  for (const auto& c : s.clips)
    out += pad(c.clip_id, w, false) + pad(fmt3(c.segsnr_db), 12, true) + pad(fmt3(c.sisnr_db), 12, true) + "\n";
  out += rule + "\n";
  out += pad("Mean", w, false) + pad(fmt3(s.mean_segsnr()), 12, true) + pad(fmt3(s.mean_sisnr()), 12, true) +
         "\n";
  return out;
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << j.dump(2) << '\n';
}

void write_report(const MetricsSummary& s, const std::filesystem::path& json_path) {
  if (json_path.has_parent_path()) std::filesystem::create_directories(json_path.parent_path());
  write_json(json_path, to_json(s));
  std::filesystem::path txt = json_path;
  txt.replace_extension(".txt");
  std::ofstream f(txt, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + txt.string());
  f << to_table(s);
}

}  // namespace upb::harness
