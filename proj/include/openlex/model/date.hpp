#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace openlex {

struct IsoWeek {
  int year = 0;
  unsigned week = 0;  // 1..53

  auto operator<=>(const IsoWeek&) const = default;
  std::string str() const;  // "2025-W32"
  static std::optional<IsoWeek> parse(std::string_view s);
};

/// Calendar date with no time zone. Stored as days since 1970-01-01.
class Date {
 public:
  constexpr Date() = default;
  Date(int year, unsigned month, unsigned day);

  static Date from_days(std::int32_t days) {
    Date d;
    d.days_ = days;
    return d;
  }
  /// Strict YYYY-MM-DD.
  static std::optional<Date> from_iso(std::string_view s);

  std::int32_t days_since_epoch() const { return days_; }
  int year() const;
  unsigned month() const;
  unsigned day() const;
  /// ISO weekday, Monday = 1.
  unsigned weekday() const;
  IsoWeek iso_week() const;
  std::string iso() const;

  static Date monday_of(IsoWeek w);
  /// Number of ISO weeks (52 or 53) in an ISO week-numbering year.
  static unsigned weeks_in_iso_year(int year);

  auto operator<=>(const Date&) const = default;

 private:
  std::int32_t days_ = 0;
};

using Timestamp = std::chrono::sys_seconds;

std::string format_timestamp(Timestamp t);  // 2025-08-01T12:00:00Z
std::optional<Timestamp> parse_timestamp(std::string_view s);

/// Date formats a source can declare for its listing pages and feeds.
///   iso      2025-07-16
///   dmy      16/07/2025 or 16-07-2025 or 16.07.2025
///   mdy      07/16/2025
///   long-en  July 16, 2025 / 16 July 2025
///   long-fr  16 juillet 2025 / 1er août 2025
///   rfc822   Wed, 16 Jul 2025 00:00:00 GMT
///   auto     iso, long-en, long-fr, rfc822 or an ISO timestamp; an all-numeric
///            non-ISO date is ambiguous and rejected.
std::optional<Date> parse_date(std::string_view text, std::string_view format);

}  // namespace openlex
