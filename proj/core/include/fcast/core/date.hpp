#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace fcast {

/// Calendar day with ISO-8601 text form (YYYY-MM-DD), stored as days since
/// 1970-01-01. Cheap to copy and totally ordered.
class Date {
public:
    Date() = default;

    /// Throws FormatError if the civil date does not exist.
    Date(int year, unsigned month, unsigned day);

    /// Parses "YYYY-MM-DD". Throws FormatError on anything else.
    static Date from_string(std::string_view iso);

    static Date from_serial(int days_since_epoch) { return Date(days_since_epoch); }

    int serial() const { return serial_; }
    int year() const;
    unsigned month() const;
    unsigned day() const;

    /// Monday through Friday.
    bool is_weekday() const;

    /// The next Monday..Friday strictly after this day (holidays ignored).
    Date next_weekday() const;

    std::string to_string() const;

    auto operator<=>(const Date&) const = default;

private:
    explicit Date(int serial) : serial_(serial) {}

    int serial_ = 0;
};

} // namespace fcast
