#include "fcast/core/date.hpp"
#include "fcast/core/errors.hpp"

#include <chrono>
#include <cstdio>

namespace fcast {

namespace {

std::chrono::year_month_day to_ymd(int serial) {
    return std::chrono::year_month_day{
        std::chrono::sys_days{std::chrono::days{serial}}};
}

} // namespace

Date::Date(int year, unsigned month, unsigned day) {
    const std::chrono::year_month_day ymd{std::chrono::year{year},
                                          std::chrono::month{month},
                                          std::chrono::day{day}};
    if (!ymd.ok()) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", year, month, day);
        throw FormatError("invalid calendar date: " + std::string(buf));
    }
    serial_ = static_cast<int>(
        std::chrono::sys_days{ymd}.time_since_epoch().count());
}

Date Date::from_string(std::string_view iso) {
    int y = 0;
    unsigned m = 0, d = 0;
    char tail = 0;
    const std::string text(iso);
    if (std::sscanf(text.c_str(), "%d-%u-%u%c", &y, &m, &d, &tail) != 3 ||
        text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw FormatError("invalid date string: '" + text + "' (want YYYY-MM-DD)");
    }
    return Date(y, m, d);
}

int Date::year() const { return static_cast<int>(to_ymd(serial_).year()); }

unsigned Date::month() const { return static_cast<unsigned>(to_ymd(serial_).month()); }

unsigned Date::day() const { return static_cast<unsigned>(to_ymd(serial_).day()); }

bool Date::is_weekday() const {
    const std::chrono::weekday wd{std::chrono::sys_days{std::chrono::days{serial_}}};
    const unsigned iso = wd.iso_encoding(); // Mon=1 .. Sun=7
    return iso <= 5;
}

Date Date::next_weekday() const {
    Date next(serial_ + 1);
    while (!next.is_weekday()) {
        next = Date(next.serial_ + 1);
    }
    return next;
}

std::string Date::to_string() const {
    const auto ymd = to_ymd(serial_);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u",
                  static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()));
    return buf;
}

} // namespace fcast
