// Copyright 2026 The UPB Toolkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "upb/harness/abx.hpp"

namespace upb::harness {

// HTTP front of an AbxService:
//   GET  /api/session[?listener=ID]  trial list, no ground truth
//   GET  /audio/<trial>/<x|a|b>      WAV bytes
//   POST /api/response               {"trial_id", "choice", "listener"?}
//   GET  /api/tally                  per-listener and total True/False counts
// Static files under ui_dir, when given, are served from "/".
class AbxServer {
 public:
  AbxServer(AbxService& service, std::optional<std::filesystem::path> ui_dir = std::nullopt);
  ~AbxServer();
  AbxServer(const AbxServer&) = delete;
  AbxServer& operator=(const AbxServer&) = delete;

  // Binds host:port (port 0 picks a free port). Throws std::runtime_error
  // when the port is busy. Returns the bound port.
  int bind(const std::string& host, int port);
  // Blocks until stop() is called from another thread.
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace upb::harness
