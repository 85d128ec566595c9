// SPDX-License-Identifier: Apache-2.0
#include "doctowers/server.hpp"

#include <httplib.h>
#include <unistd.h>

#include <fstream>
#include <sstream>

namespace doctowers {

namespace {

std::optional<std::string> read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Rejects absolute paths and any ".." component.
bool is_safe_relative(const std::string& rel) {
  if (rel.empty()) return false;
  const std::filesystem::path p(rel);
  if (p.is_absolute() || p.has_root_name()) return false;
  for (const auto& part : p) {
    if (part == "..") return false;
  }
  return true;
}

}  // namespace

struct ViewerServer::Impl {
  ServeOptions options;
  httplib::Server server;
  int port = -1;
  // httplib only closes the socket of a server that ran, so a bound but
  // never listening server closes its own.
  socket_t socket = INVALID_SOCKET;
  bool listened = false;
};

ViewerServer::ViewerServer(ServeOptions options) : impl_(std::make_unique<Impl>()) {
  impl_->options = std::move(options);
  Impl& self = *impl_;
  httplib::Server& svr = self.server;

  svr.Get("/", [](const httplib::Request&, httplib::Response& res) {
    for (const auto& a : viewer_assets()) {
      if (a.path == "index.html") {
        res.set_content(std::string(a.body), std::string(a.content_type));
        return;
      }
    }
    res.status = 404;
  });
  svr.Get(R"(/assets/(.+))", [](const httplib::Request& req, httplib::Response& res) {
    const std::string name = req.matches[1];
    for (const auto& a : viewer_assets()) {
      if (a.path == name) {
        res.set_content(std::string(a.body), std::string(a.content_type));
        return;
      }
    }
    res.status = 404;
  });
  svr.Get("/scene.json", [&self](const httplib::Request&, httplib::Response& res) {
    res.set_content(self.options.scene_bytes, "application/json");
  });
  svr.Get(R"(/pdf/(.+))", [&self](const httplib::Request& req, httplib::Response& res) {
    const std::string rel = req.matches[1];
    if (!self.options.pdf_dir || !is_safe_relative(rel)) {
      res.status = 404;
      return;
    }
    const auto path = *self.options.pdf_dir / rel;
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) {
      res.status = 404;
      return;
    }
    auto body = read_file(path);
    if (!body) {
      res.status = 404;
      return;
    }
    const bool pdf = path.extension() == ".pdf" || path.extension() == ".PDF";
    res.set_content(std::move(*body), pdf ? "application/pdf" : "application/octet-stream");
  });
  // httplib's default also sets SO_REUSEPORT, which lets a second server
  // share a busy port silently.
  svr.set_socket_options([&self](socket_t sock) {
    self.socket = sock;
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof(yes));
  });
  svr.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) res.set_content("not found\n", "text/plain");
  });
  svr.set_logger([&self](const httplib::Request& req, const httplib::Response& res) {
    if (self.options.log) {
      self.options.log(req.method + " " + req.path + " " + std::to_string(res.status) + " " +
                       std::to_string(res.body.size()) + "B");
    }
  });
}

ViewerServer::~ViewerServer() {
  stop();
  if (!impl_->listened && impl_->port > 0 && impl_->socket != INVALID_SOCKET) ::close(impl_->socket);
}

bool ViewerServer::bind(const std::string& host, int port) {
  if (port == 0) {
    impl_->port = impl_->server.bind_to_any_port(host);
    return impl_->port > 0;
  }
  if (!impl_->server.bind_to_port(host, port)) return false;
  impl_->port = port;
  return true;
}

int ViewerServer::port() const noexcept { return impl_->port; }

bool ViewerServer::listen() {
  impl_->listened = true;
  return impl_->server.listen_after_bind();
}

void ViewerServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void ViewerServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace doctowers
