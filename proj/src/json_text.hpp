// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>
#include <string>
#include <string_view>

namespace doctowers::detail {

/// Appends `s` as a quoted JSON string; invalid UTF-8 is replaced.
inline void append_json_string(std::string& out, std::string_view s) {
  out += nlohmann::json(s).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

}  // namespace doctowers::detail
