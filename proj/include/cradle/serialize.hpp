#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

namespace cradle {

inline std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return std::string(buf);
}

// full-precision scientific notation: 17 significant digits round-trip
inline std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17e", v);
    return std::string(buf);
}

// canonical encoding of a real for hashing: hex-float is exact and
// locale-independent
inline std::string hexfloat(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%a", v);
    return std::string(buf);
}

}  // namespace cradle
