#pragma once

#include <compare>
#include <optional>
#include <string>

namespace boardcore {

struct Date {
    int year = 0;
    int month = 0;  // 1..12
    int day = 0;    // 1..31

    auto operator<=>(const Date&) const = default;
};

// "YYYY-MM-DD", strict; rejects impossible dates (leap years honored).
std::optional<Date> parse_date(const std::string& s);
std::string to_string(const Date& d);

int days_in_month(int year, int month);

struct MonthIndex {
    int year = 0;
    int month = 1;  // 1..12

    auto operator<=>(const MonthIndex&) const = default;

    int linear() const { return year * 12 + (month - 1); }
    static MonthIndex from_linear(int v) { return MonthIndex{v / 12, v % 12 + 1}; }
    MonthIndex next() const { return from_linear(linear() + 1); }

    Date first_day() const { return Date{year, month, 1}; }
    Date last_day() const { return Date{year, month, days_in_month(year, month)}; }
};

// "YYYY-MM"
std::optional<MonthIndex> parse_month(const std::string& s);
std::string to_string(const MonthIndex& m);

// Closed interval [start, end] (end absent = open) intersects the month by
// at least one day.
inline bool interval_covers_month(const Date& start, const std::optional<Date>& end, const MonthIndex& m) {
    if (start > m.last_day()) return false;
    if (end && *end < m.first_day()) return false;
    return true;
}

}  // namespace boardcore
