#include "openlex/model/date.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <vector>

#include "openlex/text/utf8.hpp"

namespace openlex {

namespace {

using namespace std::chrono;

std::optional<int> to_int(std::string_view s) {
  if (s.empty()) return std::nullopt;
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

std::optional<Date> make(int y, int m, int d) {
  if (m < 1 || m > 12 || d < 1 || d > 31 || y < 1 || y > 9999) return std::nullopt;
  year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return Date(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

// Month names after diacritic folding and lowercasing.
int month_from_name(std::string_view folded) {
  static constexpr std::array<std::pair<std::string_view, int>, 40> kNames{{
      {"january", 1},  {"jan", 1},  {"february", 2}, {"feb", 2},   {"march", 3},
      {"mar", 3},      {"april", 4}, {"apr", 4},     {"may", 5},   {"june", 6},
      {"jun", 6},      {"july", 7},  {"jul", 7},     {"august", 8}, {"aug", 8},
      {"september", 9}, {"sep", 9},  {"sept", 9},    {"october", 10}, {"oct", 10},
      {"november", 11}, {"nov", 11}, {"december", 12}, {"dec", 12},
      {"janvier", 1},  {"fevrier", 2}, {"mars", 3},  {"avril", 4},  {"mai", 5},
      {"juin", 6},     {"juillet", 7}, {"aout", 8},  {"septembre", 9}, {"octobre", 10},
      {"novembre", 11}, {"decembre", 12}, {"janv", 1}, {"fevr", 2}, {"avr", 4},
      {"juil", 7},
  }};
  std::string_view s = folded;
  while (!s.empty() && s.back() == '.') s.remove_suffix(1);
  for (auto& [name, m] : kNames)
    if (name == s) return m;
  return 0;
}

std::vector<std::string> words_of(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ' ' || c == ',' || c == '\t' || c == '\n') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::optional<Date> parse_iso_prefix(std::string_view s) {
  if (s.size() < 10) return std::nullopt;
  auto d = Date::from_iso(s.substr(0, 10));
  if (!d) return std::nullopt;
  if (s.size() > 10 && s[10] != 'T' && s[10] != ' ') return std::nullopt;
  return d;
}

std::optional<Date> parse_numeric(std::string_view s, bool day_first) {
  std::array<std::string_view, 3> parts;
  std::size_t n = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == '/' || s[i] == '-' || s[i] == '.') {
      if (n == 3) return std::nullopt;
      parts[n++] = s.substr(start, i - start);
      start = i + 1;
    }
  }
  if (n != 3 || parts[2].size() != 4) return std::nullopt;
  auto a = to_int(parts[0]), b = to_int(parts[1]), y = to_int(parts[2]);
  if (!a || !b || !y) return std::nullopt;
  return day_first ? make(*y, *b, *a) : make(*y, *a, *b);
}

std::optional<Date> parse_long(std::string_view s) {
  // Leading weekday names ("Wed", "mercredi") are skipped by the window scan.
  auto w = words_of(text::fold(s));
  auto day_of = [](std::string d) -> std::optional<int> {
    if (d.size() > 2 && (d.ends_with("er") || d.ends_with("st") || d.ends_with("nd") ||
                         d.ends_with("rd") || d.ends_with("th")))
      d.resize(d.size() - 2);
    return to_int(d);
  };
  for (std::size_t i = 0; i + 3 <= w.size(); ++i) {
    // "July 16 2025"
    if (int m = month_from_name(w[i]); m != 0) {
      auto d = day_of(w[i + 1]);
      auto y = to_int(w[i + 2]);
      if (d && y && w[i + 2].size() == 4) return make(*y, m, *d);
    }
    // "16 juillet 2025"
    if (int m = month_from_name(w[i + 1]); m != 0) {
      auto d = day_of(w[i]);
      auto y = to_int(w[i + 2]);
      if (d && y && w[i + 2].size() == 4) return make(*y, m, *d);
    }
  }
  return std::nullopt;
}

}  // namespace

Date::Date(int y, unsigned m, unsigned d) {
  days_ = static_cast<std::int32_t>(
      sys_days{year_month_day{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}}}
          .time_since_epoch()
          .count());
}

std::optional<Date> Date::from_iso(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  if (!all_digits(s.substr(0, 4)) || !all_digits(s.substr(5, 2)) || !all_digits(s.substr(8, 2)))
    return std::nullopt;
  return make(*to_int(s.substr(0, 4)), *to_int(s.substr(5, 2)), *to_int(s.substr(8, 2)));
}

int Date::year() const {
  return static_cast<int>(year_month_day{sys_days{days{days_}}}.year());
}
unsigned Date::month() const {
  return static_cast<unsigned>(year_month_day{sys_days{days{days_}}}.month());
}
unsigned Date::day() const {
  return static_cast<unsigned>(year_month_day{sys_days{days{days_}}}.day());
}
unsigned Date::weekday() const {
  return std::chrono::weekday{sys_days{days{days_}}}.iso_encoding();
}

std::string Date::iso() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year(), month(), day());
  return buf;
}

IsoWeek Date::iso_week() const {
  // The ISO year is the calendar year of this week's Thursday.
  Date thursday = from_days(days_ - static_cast<std::int32_t>(weekday()) + 4);
  int y = thursday.year();
  Date jan1(y, 1, 1);
  unsigned week = static_cast<unsigned>((thursday.days_ - jan1.days_) / 7 + 1);
  return {y, week};
}

Date Date::monday_of(IsoWeek w) {
  // Jan 4 is always in week 1.
  Date jan4(w.year, 1, 4);
  Date monday1 = from_days(jan4.days_ - static_cast<std::int32_t>(jan4.weekday()) + 1);
  return from_days(monday1.days_ + static_cast<std::int32_t>((w.week - 1) * 7));
}

unsigned Date::weeks_in_iso_year(int y) {
  return Date(y, 12, 28).iso_week().week;
}

std::string IsoWeek::str() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-W%02u", year, week);
  return buf;
}

std::optional<IsoWeek> IsoWeek::parse(std::string_view s) {
  if (s.size() != 8 || s[4] != '-' || s[5] != 'W') return std::nullopt;
  if (!all_digits(s.substr(0, 4)) || !all_digits(s.substr(6, 2))) return std::nullopt;
  IsoWeek w{*to_int(s.substr(0, 4)), static_cast<unsigned>(*to_int(s.substr(6, 2)))};
  if (w.week < 1 || w.week > Date::weeks_in_iso_year(w.year)) return std::nullopt;
  return w;
}

std::string format_timestamp(Timestamp t) {
  auto dp = floor<days>(t);
  year_month_day ymd{dp};
  hh_mm_ss hms{t - dp};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02lldZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                static_cast<long long>(hms.seconds().count()));
  return buf;
}

std::optional<Timestamp> parse_timestamp(std::string_view s) {
  // YYYY-MM-DDTHH:MM:SSZ, optional fractional seconds, 'Z' or +00:00.
  if (s.size() < 19) return std::nullopt;
  auto d = Date::from_iso(s.substr(0, 10));
  if (!d || (s[10] != 'T' && s[10] != ' ') || s[13] != ':' || s[16] != ':') return std::nullopt;
  auto h = to_int(s.substr(11, 2)), m = to_int(s.substr(14, 2)), sec = to_int(s.substr(17, 2));
  if (!h || !m || !sec || *h > 23 || *m > 59 || *sec > 60) return std::nullopt;
  std::string_view rest = s.substr(19);
  if (!rest.empty() && rest[0] == '.') {
    std::size_t i = 1;
    while (i < rest.size() && std::isdigit(static_cast<unsigned char>(rest[i]))) ++i;
    rest.remove_prefix(i);
  }
  if (!(rest.empty() || rest == "Z" || rest == "+00:00")) return std::nullopt;
  return Timestamp{seconds{static_cast<long long>(d->days_since_epoch()) * 86400 + *h * 3600 +
                           *m * 60 + *sec}};
}

std::optional<Date> parse_date(std::string_view text, std::string_view format) {
  std::string trimmed{text::trim(text)};
  std::string_view s = trimmed;
  if (s.empty()) return std::nullopt;
  if (format == "iso") return Date::from_iso(s);
  if (format == "dmy") return parse_numeric(s, true);
  if (format == "mdy") return parse_numeric(s, false);
  if (format == "long-en" || format == "long-fr" || format == "rfc822") return parse_long(s);
  if (format == "auto" || format.empty()) {
    if (auto d = Date::from_iso(s)) return d;
    if (auto d = parse_iso_prefix(s)) return d;
    // Numeric day/month forms are accepted only when one reading is possible.
    auto dmy = parse_numeric(s, true), mdy = parse_numeric(s, false);
    if (dmy && mdy) return *dmy == *mdy ? dmy : std::nullopt;
    if (dmy || mdy) return dmy ? dmy : mdy;
    return parse_long(s);
  }
  return std::nullopt;
}

}  // namespace openlex
