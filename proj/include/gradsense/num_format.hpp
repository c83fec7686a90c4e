#pragma once

#include <charconv>
#include <string>

namespace gradsense {

/// Shortest decimal form that parses back to exactly the same double.
/// All emitted files use this, so re-reading an artifact recovers the
/// original bits.
inline std::string format_double(double x) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, end);
}

}  // namespace gradsense
