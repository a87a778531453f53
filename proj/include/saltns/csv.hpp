#pragma once

#include <charconv>
#include <ostream>
#include <string>

namespace saltns {

// shortest decimal text that round-trips a double at 17 significant digits
inline std::string csv_number(double v) {
    char buf[40];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    (void)ec;
    return std::string(buf, p);
}

inline std::ostream& csv_row(std::ostream& os) { return os; }

template <typename T, typename... Rest>
std::ostream& csv_row(std::ostream& os, const T& first, const Rest&... rest) {
    if constexpr (std::is_floating_point_v<T>)
        os << csv_number(first);
    else
        os << first;
    if constexpr (sizeof...(rest) > 0) {
        os << ',';
        return csv_row(os, rest...);
    }
    os << '\n';
    return os;
}

}  // namespace saltns
