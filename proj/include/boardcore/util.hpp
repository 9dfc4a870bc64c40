#pragma once

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace boardcore {

using Warnings = std::vector<std::string>;

inline void warn(Warnings* sink, std::string msg) {
    if (sink) sink->push_back(std::move(msg));
}

// Input errors that carry a file/row location in the message.
class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class SeparationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class RankDeficientError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Fixed formatting for all floating-point output; keeps artifact files
// byte-identical across runs.
inline std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

inline std::string fmt_fixed(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, x);
    return buf;
}

// FNV-1a 64, used for stage cache keys (content fingerprints, not security).
inline std::uint64_t fnv1a64(const void* data, size_t n, std::uint64_t h = 1469598103934665603ull) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t fnv1a64(const std::string& s, std::uint64_t h = 1469598103934665603ull) {
    return fnv1a64(s.data(), s.size(), h);
}

}  // namespace boardcore
