#pragma once

#include <charconv>
#include <cstdio>
#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace adjvar {

// Calendar date stored as days since 1970-01-01 (proleptic Gregorian).
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::int32_t days_since_epoch) : days_(days_since_epoch) {}

    static Date from_ymd(int year, unsigned month, unsigned day) {
        const std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                              std::chrono::day{day}};
        if (!ymd.ok()) {
            throw std::invalid_argument("invalid calendar date " + std::to_string(year) + "-" +
                                        std::to_string(month) + "-" + std::to_string(day));
        }
        return Date{static_cast<std::int32_t>(std::chrono::sys_days{ymd}.time_since_epoch().count())};
    }

    // Accepts YYYY-MM-DD.
    static std::optional<Date> try_parse_iso(std::string_view s) {
        if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
        int y = 0;
        unsigned m = 0, d = 0;
        if (!parse_uint(s.substr(0, 4), y) || !parse_uint(s.substr(5, 2), m) ||
            !parse_uint(s.substr(8, 2), d)) {
            return std::nullopt;
        }
        return checked(y, m, d);
    }

    // Accepts M/D/YYYY and MM/DD/YYYY (the EOIR export style).
    static std::optional<Date> try_parse_us(std::string_view s) {
        const auto a = s.find('/');
        if (a == std::string_view::npos) return std::nullopt;
        const auto b = s.find('/', a + 1);
        if (b == std::string_view::npos) return std::nullopt;
        int y = 0;
        unsigned m = 0, d = 0;
        const auto ys = s.substr(b + 1);
        if (ys.size() != 4 || !parse_uint(s.substr(0, a), m) || !parse_uint(s.substr(a + 1, b - a - 1), d) ||
            !parse_uint(ys, y)) {
            return std::nullopt;
        }
        return checked(y, m, d);
    }

    static Date parse(std::string_view s) {
        if (auto d = try_parse_iso(s)) return *d;
        throw std::invalid_argument("malformed date '" + std::string(s) + "'");
    }

    constexpr std::int32_t days() const noexcept { return days_; }

    std::chrono::year_month_day ymd() const {
        return std::chrono::year_month_day{std::chrono::sys_days{std::chrono::days{days_}}};
    }
    int year() const { return static_cast<int>(ymd().year()); }
    unsigned month() const { return static_cast<unsigned>(ymd().month()); }
    unsigned day() const { return static_cast<unsigned>(ymd().day()); }

    // 0 = Monday ... 6 = Sunday.
    unsigned weekday_from_monday() const {
        return std::chrono::weekday{std::chrono::sys_days{std::chrono::days{days_}}}.iso_encoding() - 1;
    }

    std::string str() const {
        const auto ymd_ = ymd();
        char buf[16];
        const int y = static_cast<int>(ymd_.year());
        const unsigned m = static_cast<unsigned>(ymd_.month());
        const unsigned d = static_cast<unsigned>(ymd_.day());
        std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", y, m, d);
        return buf;
    }

    constexpr Date operator+(std::int32_t n) const noexcept { return Date{days_ + n}; }
    constexpr Date operator-(std::int32_t n) const noexcept { return Date{days_ - n}; }
    constexpr std::int32_t operator-(Date other) const noexcept { return days_ - other.days_; }

    constexpr auto operator<=>(const Date&) const = default;

private:
    template <class T>
    static bool parse_uint(std::string_view s, T& out) {
        if (s.empty()) return false;
        const auto* end = s.data() + s.size();
        auto [ptr, ec] = std::from_chars(s.data(), end, out);
        return ec == std::errc{} && ptr == end && out >= 0;
    }

    static std::optional<Date> checked(int y, unsigned m, unsigned d) {
        const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
        if (!ymd.ok()) return std::nullopt;
        return Date{static_cast<std::int32_t>(std::chrono::sys_days{ymd}.time_since_epoch().count())};
    }

    std::int32_t days_ = 0;
};

// Monday on or before `d`.
inline Date week_start(Date d) { return d - static_cast<std::int32_t>(d.weekday_from_monday()); }

// US presidential election day: the Tuesday after the first Monday of November.
inline Date election_day(int year) {
    const Date nov1 = Date::from_ymd(year, 11, 1);
    const unsigned wd = nov1.weekday_from_monday();
    const Date first_monday = nov1 + static_cast<std::int32_t>((7 - wd) % 7);
    return first_monday + 1;
}

}  // namespace adjvar
