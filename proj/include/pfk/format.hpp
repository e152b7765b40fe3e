#pragma once

#include <charconv>
#include <string>

namespace pfk {

/// Shortest decimal string that round-trips to the same double.
inline std::string format_number(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

}  // namespace pfk
