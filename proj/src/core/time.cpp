#include "alertlens/core/time.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

#include "alertlens/core/error.hpp"

namespace alertlens {
namespace {

using std::chrono::day;
using std::chrono::month;
using std::chrono::sys_days;
using std::chrono::year;
using std::chrono::year_month_day;

bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  auto first = s.data() + pos;
  auto [ptr, ec] = std::from_chars(first, first + len, out);
  return ec == std::errc() && ptr == first + len;
}

[[noreturn]] void bad_time(std::string_view text) {
  throw Error(ErrorCode::kParse, "invalid timestamp: '" + std::string(text) + "'");
}

}  // namespace

DayIndex make_day(int y, unsigned m, unsigned d) {
  year_month_day ymd{year{y}, month{m}, day{d}};
  if (!ymd.ok()) {
    throw Error(ErrorCode::kParse, "invalid calendar date");
  }
  return static_cast<DayIndex>(sys_days{ymd}.time_since_epoch().count());
}

std::string format_day(DayIndex d) {
  year_month_day ymd{sys_days{std::chrono::days{d}}};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::string format_timestamp(Timestamp t) {
  DayIndex d = day_of(t);
  auto secs = t - day_start(d);
  char buf[16];
  std::snprintf(buf, sizeof buf, "T%02d:%02d:%02dZ", static_cast<int>(secs / 3600),
                static_cast<int>((secs / 60) % 60), static_cast<int>(secs % 60));
  return format_day(d) + buf;
}

Timestamp parse_timestamp(std::string_view text) {
  if (text.empty()) bad_time(text);
  bool numeric = true;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (!(c >= '0' && c <= '9') && !(i == 0 && c == '-')) {
      numeric = false;
      break;
    }
  }
  if (numeric) {
    Timestamp v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) bad_time(text);
    return v;
  }

  int y = 0, mo = 0, da = 0;
  if (text.size() < 10 || text[4] != '-' || text[7] != '-' || !read_int(text, 0, 4, y) ||
      !read_int(text, 5, 2, mo) || !read_int(text, 8, 2, da)) {
    bad_time(text);
  }
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(da)}};
  if (!ymd.ok()) bad_time(text);
  Timestamp t = day_start(static_cast<DayIndex>(sys_days{ymd}.time_since_epoch().count()));

  std::string_view rest = text.substr(10);
  if (rest.empty()) return t;
  if (rest.front() != 'T' && rest.front() != ' ') bad_time(text);
  int hh = 0, mm = 0, ss = 0;
  if (!read_int(rest, 1, 2, hh) || rest.size() < 6 || rest[3] != ':' || !read_int(rest, 4, 2, mm)) {
    bad_time(text);
  }
  std::size_t pos = 6;
  if (pos < rest.size() && rest[pos] == ':') {
    if (!read_int(rest, pos + 1, 2, ss)) bad_time(text);
    pos += 3;
    // fractional seconds are truncated
    if (pos < rest.size() && rest[pos] == '.') {
      ++pos;
      while (pos < rest.size() && rest[pos] >= '0' && rest[pos] <= '9') ++pos;
    }
  }
  std::string_view zone = rest.substr(pos);
  if (!(zone.empty() || zone == "Z" || zone == "+00:00")) bad_time(text);
  if (hh > 23 || mm > 59 || ss > 60) bad_time(text);
  return t + hh * 3600 + mm * 60 + ss;
}

DayIndex parse_day(std::string_view text) { return day_of(parse_timestamp(text)); }

}  // namespace alertlens
