// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace doctowers::zip {

/// Read-only view of a ZIP container (stored and deflated members, no ZIP64,
/// no encryption). The archive owns a copy of its bytes.
class Archive {
 public:
  /// Throws Error(NotAZipArchive) when the central directory cannot be found.
  static Archive open(std::string bytes);

  bool contains(std::string_view name) const noexcept;
  /// Decompressed member contents, nullopt when absent. Throws
  /// Error(NotAZipArchive) on corrupt members or CRC mismatch.
  std::optional<std::string> read(std::string_view name) const;
  std::vector<std::string> names() const;

 private:
  struct Entry {
    std::string name;
    std::uint16_t method = 0;
    std::uint16_t flags = 0;
    std::uint32_t crc = 0;
    std::uint32_t compressed_size = 0;
    std::uint32_t size = 0;
    std::uint32_t local_offset = 0;
  };
  std::string bytes_;
  std::vector<Entry> entries_;
};

/// True when the bytes start with a local file header signature.
bool looks_like_zip(std::string_view bytes) noexcept;

struct Member {
  std::string name;
  std::string data;
  bool deflate = false;
};

/// Builds an archive in memory; used for packaging fixtures and exports.
std::string write(const std::vector<Member>& members);

}  // namespace doctowers::zip
