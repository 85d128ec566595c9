// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace doctowers {

/// A file compiled into the binary and served under /assets/ (index.html
/// is served at /).
struct EmbeddedAsset {
  std::string_view path;
  std::string_view content_type;
  std::string_view body;
};

std::span<const EmbeddedAsset> viewer_assets() noexcept;

struct ServeOptions {
  std::string scene_bytes;
  std::optional<std::filesystem::path> pdf_dir;
  /// Receives one line per handled request.
  std::function<void(const std::string&)> log;
};

/// Local HTTP endpoint for the browser viewer:
///   GET /             embedded viewer page
///   GET /assets/<f>   embedded viewer assets
///   GET /scene.json   the scene file
///   GET /pdf/<f>      files from the PDF directory
class ViewerServer {
 public:
  explicit ViewerServer(ServeOptions options);
  ~ViewerServer();
  ViewerServer(const ViewerServer&) = delete;
  ViewerServer& operator=(const ViewerServer&) = delete;

  /// Binds the listening socket; port 0 picks a free port. Returns false
  /// when the port is unavailable.
  bool bind(const std::string& host, int port);
  int port() const noexcept;
  /// Serves until stop() is called. Requires a successful bind().
  bool listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace doctowers
