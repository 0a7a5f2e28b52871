#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace wikivote {

using Date = std::chrono::year_month_day;

// Inclusive calendar range [first, last].
struct DateRange {
  Date first;
  Date last;

  bool contains(Date d) const { return first <= d && d <= last; }
  int length_days() const;
};

// Strict ISO-8601 calendar date, YYYY-MM-DD. Throws DataError.
Date parse_date(std::string_view text);
std::string format_date(Date d);
// YYYYMMDD, the compact form used in REST paths.
std::string format_date_compact(Date d);

Date add_days(Date d, int n);
// b - a in whole days.
int days_between(Date a, Date b);

}  // namespace wikivote
