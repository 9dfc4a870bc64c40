#include "boardcore/dates.hpp"

#include <cctype>
#include <cstdio>

namespace boardcore {

namespace {

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

bool all_digits(const std::string& s, size_t from, size_t to) {
    for (size_t i = from; i < to; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

}  // namespace

int days_in_month(int year, int month) {
    static const int base[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2 && is_leap(year)) return 29;
    return base[month - 1];
}

std::optional<Date> parse_date(const std::string& s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    if (!all_digits(s, 0, 4) || !all_digits(s, 5, 7) || !all_digits(s, 8, 10)) return std::nullopt;
    Date d;
    d.year = std::stoi(s.substr(0, 4));
    d.month = std::stoi(s.substr(5, 2));
    d.day = std::stoi(s.substr(8, 2));
    if (d.month < 1 || d.month > 12) return std::nullopt;
    if (d.day < 1 || d.day > days_in_month(d.year, d.month)) return std::nullopt;
    return d;
}

std::string to_string(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

std::optional<MonthIndex> parse_month(const std::string& s) {
    if (s.size() != 7 || s[4] != '-') return std::nullopt;
    if (!all_digits(s, 0, 4) || !all_digits(s, 5, 7)) return std::nullopt;
    MonthIndex m;
    m.year = std::stoi(s.substr(0, 4));
    m.month = std::stoi(s.substr(5, 2));
    if (m.month < 1 || m.month > 12) return std::nullopt;
    return m;
}

std::string to_string(const MonthIndex& m) {
    char buf[12];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", m.year, m.month);
    return buf;
}

}  // namespace boardcore
