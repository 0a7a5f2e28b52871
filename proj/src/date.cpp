#include "wikivote/date.hpp"

#include <charconv>
#include <cstdio>

#include "wikivote/error.hpp"

namespace wikivote {

namespace {

int parse_fixed_int(std::string_view text, std::string_view whole) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw DataError("invalid date '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

int DateRange::length_days() const { return days_between(first, last) + 1; }

Date parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    throw DataError("invalid date '" + std::string(text) + "' (expected YYYY-MM-DD)");
  }
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
    if (text[i] < '0' || text[i] > '9') {
      throw DataError("invalid date '" + std::string(text) + "' (expected YYYY-MM-DD)");
    }
  }
  const Date d{std::chrono::year{parse_fixed_int(text.substr(0, 4), text)},
               std::chrono::month{static_cast<unsigned>(parse_fixed_int(text.substr(5, 2), text))},
               std::chrono::day{static_cast<unsigned>(parse_fixed_int(text.substr(8, 2), text))}};
  if (!d.ok()) {
    throw DataError("invalid calendar date '" + std::string(text) + "'");
  }
  return d;
}

std::string format_date(Date d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

std::string format_date_compact(Date d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d%02u%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

Date add_days(Date d, int n) {
  return Date{std::chrono::sys_days{d} + std::chrono::days{n}};
}

int days_between(Date a, Date b) {
  return static_cast<int>((std::chrono::sys_days{b} - std::chrono::sys_days{a}).count());
}

}  // namespace wikivote
