// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

namespace doctowers {

/// Shortest decimal that parses back to the same double; integral values
/// print without a decimal point. Negative zero prints as "0".
void append_number(std::string& out, double value);
std::string format_number(double value);

}  // namespace doctowers
