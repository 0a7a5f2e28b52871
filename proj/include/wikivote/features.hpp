#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "wikivote/date.hpp"
#include "wikivote/domain.hpp"
#include "wikivote/ingest.hpp"

namespace wikivote {

inline constexpr int kWindowDays = 7;
inline constexpr double kSmallPartyThreshold = 15.0;

// Regression covariates for one observation. Shares are 0-100 within the
// observation's election group.
struct FeatureRow {
  std::string party_id;
  std::string country;
  Date election_date;
  double wiki_share = 0.0;
  double news_share = 0.0;
  int new_party = 0;
  int incumbent = 0;
  double vote_share = 0.0;
  double vote_change = 0.0;

  bool operator==(const FeatureRow&) const = default;
};

struct WindowCount {
  std::int64_t views = 0;
  int days_covered = 0;
  int days_in_window = kWindowDays;
};

// The seven days [election_date - 7, election_date - 1]; polling day itself
// is excluded.
DateRange week_before(Date election_date);

// Sum of daily views over week_before(election_date). Missing days add
// nothing and lower `days_covered`. Throws DataError("no data in window")
// when no day of the window is present.
WindowCount window_views(const PageViewSeries& series, Date election_date);

using ShareMap = std::map<std::string, double>;  // party_id -> percent

// share_i = 100 * count_i / sum_j count_j over the group's parties. Throws
// DataError for a missing party or a zero total.
ShareMap traffic_shares(const ElectionGroup& group, const std::map<std::string, double>& window_sums);
ShareMap news_shares(const ElectionGroup& group);

using WindowSums = std::map<ObservationKey, double>;

// Week-before views per observation. Rows carrying `wiki_views` use it
// directly; otherwise the page title (or '|'-separated candidates) is looked
// up in `series` for the observation's project and resolved with
// resolve_page_variant. Resolution and coverage notes go to `notes`.
WindowSums compute_window_sums(const Dataset& dataset, std::span<const PageViewSeries> series,
                               std::vector<std::string>* notes = nullptr);

// One row per observation, in dataset order.
std::vector<FeatureRow> build_feature_rows(const Dataset& dataset, const WindowSums& window_sums);

// Rows with vote_share strictly below `threshold`.
std::vector<FeatureRow> subset_small(std::span<const FeatureRow> rows,
                                     double threshold = kSmallPartyThreshold);

// (now - old) / old as a plain ratio. Throws ArgumentError for old <= 0.
double relative_change(double old_value, double new_value);

const std::vector<std::string>& feature_csv_columns();
void write_feature_csv(std::ostream& out, std::span<const FeatureRow> rows);

}  // namespace wikivote
