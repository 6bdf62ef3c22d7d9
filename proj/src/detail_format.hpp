#pragma once

#include <cstdio>
#include <string>

namespace catforge::detail {

/// Full-precision decimal form; round-trips the double bit-exactly.
inline std::string format_full(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

/// Fixed-point form for SVG coordinates.
inline std::string format_px(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.2f", value);
    return buf;
}

/// Compact form for axis labels.
inline std::string format_label(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4g", value);
    return buf;
}

}  // namespace catforge::detail
