#include <cmath>

#include <fmt/format.h>

#include "wikivote/error.hpp"
#include "wikivote/forecast.hpp"

namespace wikivote {

namespace {

struct LogLinearFit {
  double slope = 0.0;
  double r2 = 0.0;
  int days = 0;
};

// Least-squares line through (days from peak, ln views) over [first, last],
// zero-count days dropped.
LogLinearFit fit_log_views(const PageViewSeries& series, Date peak, Date first, Date last,
                           const char* side) {
  std::vector<double> offsets, logs;
  for (auto it = series.daily.lower_bound(first); it != series.daily.end() && it->first <= last;
       ++it) {
    if (it->second <= 0) continue;
    offsets.push_back(days_between(peak, it->first));
    logs.push_back(std::log(static_cast<double>(it->second)));
  }
  LogLinearFit out;
  out.days = static_cast<int>(offsets.size());
  if (out.days < kMinAttentionSideDays) {
    throw DataError(fmt::format("{}/{}: only {} positive-count days {} the peak (need {})",
                                series.wiki_project, series.page_title, out.days, side,
                                kMinAttentionSideDays));
  }
  Matrix x(offsets.size(), 2, 1.0);
  for (std::size_t i = 0; i < offsets.size(); ++i) x(i, 1) = offsets[i];
  bool flat = true;
  for (double v : logs) flat = flat && v == logs.front();
  if (flat) return out;
  const auto fit = ols_fit(DesignMatrix(std::move(x), {kIntercept, "days_from_peak"}), logs);
  out.slope = fit.terms[1].beta;
  out.r2 = fit.r2;
  return out;
}

}  // namespace

AttentionDynamics attention_dynamics(const PageViewSeries& series, Date election_date,
                                     int window_days) {
  if (window_days < 1) throw ArgumentError("attention window must be at least one day");
  const Date lo = add_days(election_date, -window_days);
  const Date hi = add_days(election_date, window_days);
  const std::string label = series.wiki_project + "/" + series.page_title;

  auto begin = series.daily.lower_bound(lo);
  auto end = series.daily.upper_bound(hi);
  if (begin == end) {
    throw DataError(label + ": no data within " + std::to_string(window_days) +
                    " days of the election");
  }
  auto peak = begin;
  for (auto it = begin; it != end; ++it) {
    if (it->second > peak->second) peak = it;
  }
  if (peak == begin || std::next(peak) == end) {
    throw DataError(label + ": peak not interior (" + format_date(peak->first) + ")");
  }

  AttentionDynamics out;
  out.peak_date = peak->first;
  out.peak_views = peak->second;
  const auto up = fit_log_views(series, out.peak_date, add_days(out.peak_date, -window_days),
                                add_days(out.peak_date, -1), "before");
  const auto down = fit_log_views(series, out.peak_date, add_days(out.peak_date, 1),
                                  add_days(out.peak_date, window_days), "after");
  out.lambda_up = up.slope;
  out.lambda_down = -down.slope;
  out.fit_quality_up = up.r2;
  out.fit_quality_down = down.r2;
  out.days_up = up.days;
  out.days_down = down.days;
  if (!(out.lambda_up > 0.0)) {
    throw DataError(fmt::format("{}: no build-up before the peak (rate {:.4g})", label, out.lambda_up));
  }
  if (!(out.lambda_down > 0.0)) {
    throw DataError(fmt::format("{}: no decay after the peak (rate {:.4g})", label, out.lambda_down));
  }
  return out;
}

}  // namespace wikivote
