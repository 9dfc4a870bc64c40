#include "boardcore/rational.hpp"

#include <cctype>

namespace boardcore {

namespace {

bool parse_ll(const std::string& s, long long& out) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    try {
        out = std::stoll(s);
    } catch (...) {
        return false;
    }
    return true;
}

}  // namespace

std::optional<Rat> parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        long long n, d;
        if (!parse_ll(s.substr(0, slash), n) || !parse_ll(s.substr(slash + 1), d) || d == 0) {
            return std::nullopt;
        }
        return Rat::make(n, d);
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
        if (ip.empty()) ip = "0";
        long long whole, frac;
        if (!parse_ll(ip, whole) || fp.empty() || fp.size() > 9 || !parse_ll(fp, frac)) {
            return std::nullopt;
        }
        long long scale = 1;
        for (size_t i = 0; i < fp.size(); ++i) scale *= 10;
        return Rat::make(whole * scale + frac, scale);
    }
    long long n;
    if (!parse_ll(s, n)) return std::nullopt;
    return Rat::make(n, 1);
}

}  // namespace boardcore
