// Copyright 2026 The UPB Toolkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "upb/harness/abx.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace upb::harness {

namespace fs = std::filesystem;

namespace {

ApiReply error_reply(int status, const std::string& message) {
  return {status, {{"error", message}}};
}

double percent(std::size_t part, std::size_t whole) {
  return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

}  // namespace

nlohmann::ordered_json to_json(const AbxTally& t) {
  nlohmann::ordered_json j;
  j["listeners"] = nlohmann::ordered_json::array();
  for (const auto& [name, c] : t.per_listener)
    j["listeners"].push_back({{"listener", name}, {"true", c.true_count}, {"false", c.false_count}});
  const std::size_t n = t.total.true_count + t.total.false_count;
  j["total"] = {{"true", t.total.true_count},
                {"false", t.total.false_count},
                {"answered", n},
                {"true_pct", percent(t.total.true_count, n)},
                {"false_pct", percent(t.total.false_count, n)}};
  j["table"] = to_table(t);
  return j;
}

std::string to_table(const AbxTally& t) {
  const std::size_t n = t.total.true_count + t.total.false_count;
  if (n == 0) return "no responses recorded\n";
  char buf[64];
  std::string head = "Result", yes = "True  ", no = "False ";
  for (const auto& [name, c] : t.per_listener) {
    std::snprintf(buf, sizeof buf, " | %6s", name.c_str());
    head += buf;
    std::snprintf(buf, sizeof buf, " | %6zu", c.true_count);
    yes += buf;
    std::snprintf(buf, sizeof buf, " | %6zu", c.false_count);
    no += buf;
  }
  std::snprintf(buf, sizeof buf, " | %s\n", "Total");
  head += buf;
  std::snprintf(buf, sizeof buf, " | %zu (%.2f%%)\n", t.total.true_count, percent(t.total.true_count, n));
  yes += buf;
  std::snprintf(buf, sizeof buf, " | %zu (%.2f%%)\n", t.total.false_count, percent(t.total.false_count, n));
  no += buf;
  return head + yes + no;
}

AbxService::AbxService(fs::path session_dir) : dir_(std::move(session_dir)) {
  std::ifstream in(dir_ / "manifest.json");
  if (!in) throw std::runtime_error("no ABX session at " + dir_.string() + " (manifest.json missing)");
  const auto manifest = nlohmann::json::parse(in);
  for (const auto& t : manifest.at("trials")) {
    AbxTrial trial;
    trial.trial_id = t.at("trial_id").get<std::string>();
    trial.clip_id = t.at("clip_id").get<std::string>();
    trial.order = t.at("order").get<std::string>() == "unbiased-first" ? StimulusOrder::kUnbiasedFirst
                                                                        : StimulusOrder::kBiasedFirst;
    trial.theta = t.at("theta").get<double>();
    index_.emplace(trial.trial_id, trials_.size());
    trials_.push_back(std::move(trial));
  }

  std::ifstream log(dir_ / "responses.jsonl");
  std::string line;
  while (std::getline(log, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    AbxResponse r{j.at("listener").get<std::string>(), j.at("trial_id").get<std::string>(),
                  j.at("choice").get<std::string>().at(0), j.at("correct").get<bool>()};
    started_.insert(r.listener);
    answered_.emplace(r.listener, r.trial_id);
    responses_.push_back(std::move(r));
  }
}

ApiReply AbxService::get_session(const std::string& listener) {
  std::lock_guard<std::mutex> lock(mu_);
  started_.insert(listener);
  nlohmann::ordered_json j;
  j["listener"] = listener;
  j["total"] = trials_.size();
  j["trials"] = nlohmann::ordered_json::array();
  for (const auto& t : trials_) {
    nlohmann::ordered_json v;
    v["trial_id"] = t.trial_id;
    v["audio"] = {{"x", "/audio/" + t.trial_id + "/x"},
                  {"a", "/audio/" + t.trial_id + "/a"},
                  {"b", "/audio/" + t.trial_id + "/b"}};
    v["answered"] = answered_.count({listener, t.trial_id}) > 0;
    j["trials"].push_back(std::move(v));
  }
  return {200, std::move(j)};
}

ApiReply AbxService::post_response(const nlohmann::json& body) {
  if (!body.is_object() || !body.contains("trial_id") || !body["trial_id"].is_string() ||
      !body.contains("choice") || !body["choice"].is_string())
    return error_reply(400, "body must be {\"trial_id\": string, \"choice\": \"A\"|\"B\"}");
  const std::string choice = body["choice"].get<std::string>();
  if (choice != "A" && choice != "B") return error_reply(400, "choice must be \"A\" or \"B\"");
  std::string listener = kDefaultListener;
  if (body.contains("listener")) {
    if (!body["listener"].is_string() || body["listener"].get<std::string>().empty())
      return error_reply(400, "listener must be a non-empty string");
    listener = body["listener"].get<std::string>();
  }
  const std::string trial_id = body["trial_id"].get<std::string>();

  std::lock_guard<std::mutex> lock(mu_);
  if (!started_.count(listener)) return error_reply(409, "fetch /api/session before responding");
  const auto it = index_.find(trial_id);
  if (it == index_.end()) return error_reply(404, "unknown trial '" + trial_id + "'");
  if (answered_.count({listener, trial_id})) return error_reply(409, "trial '" + trial_id + "' already answered");

  const AbxTrial& t = trials_[it->second];
  const char unbiased = t.order == StimulusOrder::kUnbiasedFirst ? 'A' : 'B';
  const AbxResponse r{listener, trial_id, choice[0], choice[0] == unbiased};
  record(r);
  nlohmann::ordered_json j;
  j["trial_id"] = trial_id;
  j["listener"] = listener;
  j["accepted"] = true;
  j["answered"] = std::count_if(responses_.begin(), responses_.end(),
                                [&](const AbxResponse& x) { return x.listener == listener; });
  return {200, std::move(j)};
}

void AbxService::record(const AbxResponse& r) {
  nlohmann::ordered_json j;
  j["listener"] = r.listener;
  j["trial_id"] = r.trial_id;
  j["choice"] = std::string(1, r.choice);
  j["correct"] = r.correct;
  std::ofstream out(dir_ / "responses.jsonl", std::ios::app);
  if (!out) throw std::runtime_error("cannot append to " + (dir_ / "responses.jsonl").string());
  out << j.dump() << '\n';
  out.flush();
  answered_.emplace(r.listener, r.trial_id);
  responses_.push_back(r);
}

ApiReply AbxService::get_tally() { return {200, to_json(tally())}; }

AbxTally AbxService::tally() const {
  std::lock_guard<std::mutex> lock(mu_);
  return tally_locked();
}

AbxTally AbxService::tally_locked() const {
  AbxTally t;
  for (const auto& r : responses_) {
    TallyCounts& c = t.per_listener[r.listener];
    (r.correct ? c.true_count : c.false_count)++;
    (r.correct ? t.total.true_count : t.total.false_count)++;
  }
  return t;
}

std::size_t AbxService::response_count() const {
  std::lock_guard<std::mutex> lock(mu_);
  return responses_.size();
}

std::optional<fs::path> AbxService::audio_path(const std::string& trial_id, const std::string& which) const {
  if (!index_.count(trial_id) || (which != "x" && which != "a" && which != "b")) return std::nullopt;
  return dir_ / "audio" / trial_id / (which + ".wav");
}

}  // namespace upb::harness
