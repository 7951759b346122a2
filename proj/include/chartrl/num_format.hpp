#pragma once

#include <charconv>
#include <string>

namespace chartrl {

/// Shortest decimal form that round-trips the double exactly.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace chartrl
