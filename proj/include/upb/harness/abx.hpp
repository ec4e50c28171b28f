// Copyright 2026 The UPB Toolkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

namespace upb::harness {

enum class StimulusOrder { kUnbiasedFirst, kBiasedFirst };

struct AbxTrial {
  std::string trial_id;
  std::string clip_id;
  StimulusOrder order = StimulusOrder::kUnbiasedFirst;
  double theta = 0.0;
};

struct AbxResponse {
  std::string listener;
  std::string trial_id;
  char choice = 'A';  // 'A' or 'B'
  bool correct = false;
};

struct TallyCounts {
  std::size_t true_count = 0;
  std::size_t false_count = 0;
};

struct AbxTally {
  std::map<std::string, TallyCounts> per_listener;
  TallyCounts total;
};

nlohmann::ordered_json to_json(const AbxTally& t);
// Result | P1 | P2 ... | Total layout with the total percentages.
std::string to_table(const AbxTally& t);

struct ApiReply {
  int status = 200;
  nlohmann::ordered_json body;
};

// Listening-test state for one generated session directory. Responses are
// appended to <dir>/responses.jsonl as they are accepted and replayed on
// construction. All public members are serialized by an internal mutex.
class AbxService {
 public:
  explicit AbxService(std::filesystem::path session_dir);

  // Trial list without ground truth. Registers the listener as started.
  ApiReply get_session(const std::string& listener);
  // Body: {"trial_id": str, "choice": "A"|"B", "listener": str (optional)}.
  // 409 before the listener fetched the session or on a repeated answer,
  // 404 for an unknown trial, 400 for a malformed body.
  ApiReply post_response(const nlohmann::json& body);
  ApiReply get_tally();

  // Stimulus file for which in {"x", "a", "b"}; nullopt if unknown.
  std::optional<std::filesystem::path> audio_path(const std::string& trial_id, const std::string& which) const;

  AbxTally tally() const;
  std::size_t response_count() const;
  const std::vector<AbxTrial>& trials() const noexcept { return trials_; }

  static constexpr const char* kDefaultListener = "P1";

 private:
  AbxTally tally_locked() const;
  void record(const AbxResponse& r);

  std::filesystem::path dir_;
  std::vector<AbxTrial> trials_;
  std::map<std::string, std::size_t> index_;
  mutable std::mutex mu_;
  std::set<std::string> started_;
  std::set<std::pair<std::string, std::string>> answered_;
  std::vector<AbxResponse> responses_;
};

}  // namespace upb::harness
