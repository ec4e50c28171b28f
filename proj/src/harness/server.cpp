// Copyright 2026 The UPB Toolkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "upb/harness/server.hpp"

#include <fstream>
#include <iterator>
#include <stdexcept>

#include "httplib.h"

namespace upb::harness {

struct AbxServer::Impl {
  AbxService& service;
  httplib::Server http;
};

namespace {

void send(httplib::Response& res, const ApiReply& reply) {
  res.status = reply.status;
  res.set_content(reply.body.dump(), "application/json");
}

}  // namespace

AbxServer::AbxServer(AbxService& service, std::optional<std::filesystem::path> ui_dir)
    : impl_(new Impl{service, {}}) {
  auto& http = impl_->http;
  AbxService& svc = impl_->service;

  // httplib's default sets SO_REUSEPORT, which lets a second server bind a
  // port that is already serving. Plain SO_REUSEADDR reports it as busy.
  http.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });

  http.Get("/api/session", [&svc](const httplib::Request& req, httplib::Response& res) {
    const std::string listener =
        req.has_param("listener") ? req.get_param_value("listener") : AbxService::kDefaultListener;
    send(res, svc.get_session(listener));
  });

  http.Post("/api/response", [&svc](const httplib::Request& req, httplib::Response& res) {
    const auto body = nlohmann::json::parse(req.body, nullptr, false);
    if (body.is_discarded()) {
      send(res, {400, {{"error", "request body is not JSON"}}});
      return;
    }
    send(res, svc.post_response(body));
  });

  http.Get("/api/tally", [&svc](const httplib::Request&, httplib::Response& res) { send(res, svc.get_tally()); });

  http.Get(R"(/audio/([^/]+)/([xab]))", [&svc](const httplib::Request& req, httplib::Response& res) {
    const auto path = svc.audio_path(req.matches[1], req.matches[2]);
    std::ifstream f;
    if (path) f.open(*path, std::ios::binary);
    if (!f.is_open()) {
      send(res, {404, {{"error", "unknown stimulus"}}});
      return;
    }
    std::string bytes((std::istreambuf_iterator<char>(f)), {});
    res.set_content(std::move(bytes), "audio/wav");
  });

  if (ui_dir && !http.set_mount_point("/", ui_dir->string()))
    throw std::runtime_error("UI directory not found: " + ui_dir->string());
}

AbxServer::~AbxServer() { stop(); }

int AbxServer::bind(const std::string& host, int port) {
  int bound = -1;
  if (port == 0)
    bound = impl_->http.bind_to_any_port(host);
  else if (impl_->http.bind_to_port(host, port))
    bound = port;
  if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port) + " (port busy?)");
  return bound;
}

void AbxServer::run() { impl_->http.listen_after_bind(); }

void AbxServer::stop() {
  if (impl_) impl_->http.stop();
}

}  // namespace upb::harness
