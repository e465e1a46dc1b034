#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <string>

namespace implreg {

// Shortest representation that round-trips to the same double (at most 17
// significant digits). Non-finite values print as "nan", "inf", "-inf".
inline std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf.data(), end);
}

}  // namespace implreg
