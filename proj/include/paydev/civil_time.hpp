#pragma once

// Local civil time from a UTC instant plus the fixed offset recorded with the
// commit. No time-zone database is consulted: the offset is all there is.

#include <cstdio>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace paydev {

enum class Weekday { mon, tue, wed, thu, fri, sat, sun };

inline constexpr bool is_weekend(Weekday d) noexcept {
  return d == Weekday::sat || d == Weekday::sun;
}

struct CivilDate {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31
  auto operator<=>(const CivilDate&) const = default;
};

struct IsoWeek {
  int year = 1970;
  int week = 1;  // 1..53
  auto operator<=>(const IsoWeek&) const = default;
};

struct LocalTime {
  CivilDate date;
  int hour = 0;
  int minute = 0;
  Weekday weekday = Weekday::thu;
  IsoWeek iso_week;
  bool operator==(const LocalTime&) const = default;
};

inline constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) noexcept {
  std::int64_t q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

inline constexpr std::int64_t floor_mod(std::int64_t a, std::int64_t b) noexcept {
  return a - floor_div(a, b) * b;
}

// Days since 1970-01-01 in the proleptic Gregorian calendar.
inline constexpr std::int64_t days_from_civil(int year, int month, int day) noexcept {
  const std::int64_t y = static_cast<std::int64_t>(year) - (month <= 2 ? 1 : 0);
  const std::int64_t era = floor_div(y, 400);
  const std::int64_t yoe = y - era * 400;
  const std::int64_t mp = (month + 9) % 12;
  const std::int64_t doy = (153 * mp + 2) / 5 + day - 1;
  const std::int64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + doe - 719468;
}

inline constexpr std::int64_t days_from_civil(const CivilDate& d) noexcept {
  return days_from_civil(d.year, d.month, d.day);
}

inline constexpr CivilDate civil_from_days(std::int64_t z) noexcept {
  z += 719468;
  const std::int64_t era = floor_div(z, 146097);
  const std::int64_t doe = z - era * 146097;
  const std::int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const std::int64_t mp = (5 * doy + 2) / 153;
  const int day = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  const int month = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
  const std::int64_t year = yoe + era * 400 + (month <= 2 ? 1 : 0);
  return CivilDate{static_cast<int>(year), month, day};
}

inline constexpr Weekday weekday_from_days(std::int64_t z) noexcept {
  // 1970-01-01 was a Thursday.
  return static_cast<Weekday>(floor_mod(z + 3, 7));
}

inline constexpr IsoWeek iso_week_from_days(std::int64_t z) noexcept {
  const std::int64_t thursday = z - static_cast<std::int64_t>(weekday_from_days(z)) + 3;
  const int year = civil_from_days(thursday).year;
  const std::int64_t jan1 = days_from_civil(year, 1, 1);
  return IsoWeek{year, static_cast<int>((thursday - jan1) / 7 + 1)};
}

inline constexpr LocalTime to_local(std::int64_t timestamp_utc, int offset_minutes) noexcept {
  const std::int64_t t = timestamp_utc + 60 * static_cast<std::int64_t>(offset_minutes);
  const std::int64_t days = floor_div(t, 86400);
  const std::int64_t secs = t - days * 86400;
  LocalTime lt;
  lt.date = civil_from_days(days);
  lt.hour = static_cast<int>(secs / 3600);
  lt.minute = static_cast<int>((secs % 3600) / 60);
  lt.weekday = weekday_from_days(days);
  lt.iso_week = iso_week_from_days(days);
  return lt;
}

inline constexpr bool is_leap_year(int y) noexcept {
  return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

inline constexpr int days_in_month(int y, int m) noexcept {
  constexpr int table[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m == 2 && is_leap_year(y) ? 29 : table[m - 1];
}

// Strict `YYYY-MM-DD`.
inline std::optional<CivilDate> parse_iso_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  auto num = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
      if (s[i] < '0' || s[i] > '9') return std::nullopt;
      v = v * 10 + (s[i] - '0');
    }
    return v;
  };
  auto y = num(0, 4), m = num(5, 2), d = num(8, 2);
  if (!y || !m || !d) return std::nullopt;
  if (*m < 1 || *m > 12 || *d < 1 || *d > days_in_month(*y, *m)) return std::nullopt;
  return CivilDate{*y, *m, *d};
}

inline std::string format_iso_date(const CivilDate& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

}  // namespace paydev
