// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace doctowers::xml {

/// Minimal element tree. Names are stored without namespace prefix so that
/// lookups work across ALTO schema versions and IDML package prefixes.
struct Node {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Node> children;
  std::string text;
  std::size_t line = 0;

  std::optional<std::string_view> attr(std::string_view local_name) const;
  const Node* child(std::string_view local_name) const;
  std::vector<const Node*> children_named(std::string_view local_name) const;
};

/// Parses a complete document and returns its root element. Throws
/// Error(MalformedXml) with line/column context on failure.
Node parse(std::string_view bytes);

std::string_view local_name(std::string_view qualified) noexcept;

}  // namespace doctowers::xml
