#pragma once

#include <array>
#include <charconv>
#include <string>

namespace layerfem {

/// Shortest decimal string that round-trips to the same double.
inline std::string shortest(double value)
{
    std::array<char, 32> buffer{};
    auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    if (ec != std::errc{}) {
        return "nan";
    }
    return std::string(buffer.data(), end);
}

}  // namespace layerfem
