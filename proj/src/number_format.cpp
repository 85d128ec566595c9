// SPDX-License-Identifier: Apache-2.0
#include "doctowers/number_format.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "doctowers/error.hpp"

namespace doctowers {

void append_number(std::string& out, double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::InvalidArgument, "cannot serialize a non-finite number");
  }
  if (value == 0.0) value = 0.0;  // drops the sign of -0
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  out.append(buf.data(), res.ptr);
}

std::string format_number(double value) {
  std::string s;
  append_number(s, value);
  return s;
}

}  // namespace doctowers
