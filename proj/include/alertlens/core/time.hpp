#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace alertlens {

// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;
// Days since the Unix epoch, UTC.
using DayIndex = std::int32_t;

inline constexpr Timestamp kSecondsPerDay = 86400;

constexpr DayIndex day_of(Timestamp t) {
  return static_cast<DayIndex>(t >= 0 ? t / kSecondsPerDay : (t - kSecondsPerDay + 1) / kSecondsPerDay);
}
constexpr Timestamp day_start(DayIndex d) { return static_cast<Timestamp>(d) * kSecondsPerDay; }
constexpr int hour_of(Timestamp t) { return static_cast<int>((t - day_start(day_of(t))) / 3600); }

// 0 = Monday ... 6 = Sunday. 1970-01-01 was a Thursday.
constexpr int weekday_of(DayIndex d) { return static_cast<int>(((d % 7) + 7 + 3) % 7); }
// Monday of the ISO week containing day d.
constexpr DayIndex iso_week_start(DayIndex d) { return d - weekday_of(d); }

DayIndex make_day(int year, unsigned month, unsigned day);

// "2021-03-15T08:30:00Z"
std::string format_timestamp(Timestamp t);
// "2021-03-15"
std::string format_day(DayIndex d);

// Accepts "YYYY-MM-DD", "YYYY-MM-DDTHH:MM[:SS]" with an optional trailing 'Z'
// or "+00:00", or a plain integer of epoch seconds. Throws Error(kParse).
Timestamp parse_timestamp(std::string_view text);
DayIndex parse_day(std::string_view text);

}  // namespace alertlens
