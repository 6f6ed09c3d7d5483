#pragma once

#include <charconv>
#include <string>

namespace spindimer {

/// Shortest decimal string that round-trips to the same double.
inline std::string format_double(double value) {
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    if (ec != std::errc{}) return "nan";
    return std::string(buffer, ptr);
}

}  // namespace spindimer
