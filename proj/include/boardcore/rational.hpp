#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>

namespace boardcore {

// Exact non-negative rational. Comparisons cross-multiply in 128 bits, so
// graph scores never go through floating point.
struct Rat {
    long long num = 0;
    long long den = 1;

    static Rat make(long long n, long long d) {
        Rat r{n, d};
        r.normalize();
        return r;
    }

    void normalize() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        if (num == 0) den = 1;
    }

    friend bool operator<(const Rat& a, const Rat& b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator==(const Rat& a, const Rat& b) { return a.num == b.num && a.den == b.den; }
    friend bool operator<=(const Rat& a, const Rat& b) { return a < b || a == b; }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator>=(const Rat& a, const Rat& b) { return b <= a; }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    std::string to_string() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

// Accepts "1", "0.5", "3/2".
std::optional<Rat> parse_rational(const std::string& s);

// Edge weights and degrees on the reach graph live on a half-integer
// lattice; counts are stored doubled so all arithmetic stays integral.
struct HalfUnits {
    long long hu = 0;

    auto operator<=>(const HalfUnits&) const = default;
    HalfUnits operator+(HalfUnits o) const { return HalfUnits{hu + o.hu}; }
    HalfUnits& operator+=(HalfUnits o) {
        hu += o.hu;
        return *this;
    }

    double value() const { return static_cast<double>(hu) / 2.0; }

    // One fractional digit, e.g. "3.0", "1.5".
    std::string to_string() const {
        long long whole = hu / 2;
        return std::to_string(whole) + (hu % 2 ? ".5" : ".0");
    }
};

}  // namespace boardcore
