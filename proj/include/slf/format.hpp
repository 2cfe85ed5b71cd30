#pragma once

#include <charconv>
#include <string>

namespace slf {

// Shortest decimal string that round-trips the double exactly. Keeps CSV and
// JSON output byte-stable across runs.
inline std::string shortest_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, end);
}

}  // namespace slf
