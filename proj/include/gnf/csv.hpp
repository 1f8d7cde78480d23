#pragma once

#include <charconv>
#include <string>

namespace gnf {

// CSV number rendering: 12 significant digits, '.' decimal separator,
// locale independent. Infinities render as "inf".
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

}  // namespace gnf
