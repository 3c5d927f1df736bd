#pragma once

#include <charconv>
#include <string>

namespace kknn {

/// Shortest decimal string that round-trips the exact double value.
/// Used by every CSV/JSON writer so outputs are byte-deterministic.
inline std::string format_double(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace kknn
