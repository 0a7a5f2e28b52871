#include "wikivote/features.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "wikivote/csv.hpp"
#include "wikivote/error.hpp"

namespace wikivote {

namespace {

std::string group_label(const ElectionGroup& group) {
  return "(" + group.country + ", " + format_date(group.election_date) + ")";
}

ShareMap normalise(const ElectionGroup& group, const std::map<std::string, double>& counts,
                   const char* what) {
  double total = 0.0;
  for (const auto& obs : group.observations) {
    auto it = counts.find(obs.party_id);
    if (it == counts.end()) {
      throw DataError(fmt::format("{} missing for party '{}' in election {}", what, obs.party_id,
                                  group_label(group)));
    }
    if (!(it->second >= 0.0) || !std::isfinite(it->second)) {
      throw DataError(fmt::format("{} for party '{}' must be a non-negative number", what,
                                  obs.party_id));
    }
    total += it->second;
  }
  if (total <= 0.0) {
    throw DataError(fmt::format("zero total {} in election {}", what, group_label(group)));
  }
  ShareMap shares;
  for (const auto& obs : group.observations) {
    shares[obs.party_id] = 100.0 * counts.at(obs.party_id) / total;
  }
  return shares;
}

std::vector<std::string> split_titles(const std::string& titles) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (begin <= titles.size()) {
    auto end = titles.find('|', begin);
    if (end == std::string::npos) end = titles.size();
    if (end > begin) out.push_back(titles.substr(begin, end - begin));
    begin = end + 1;
  }
  return out;
}

}  // namespace

DateRange week_before(Date election_date) {
  return {add_days(election_date, -kWindowDays), add_days(election_date, -1)};
}

WindowCount window_views(const PageViewSeries& series, Date election_date) {
  const auto window = week_before(election_date);
  WindowCount count;
  for (auto it = series.daily.lower_bound(window.first);
       it != series.daily.end() && it->first <= window.last; ++it) {
    count.views += it->second;
    ++count.days_covered;
  }
  if (count.days_covered == 0) {
    throw DataError("no data in window " + format_date(window.first) + ".." +
                    format_date(window.last) + " for " + series.wiki_project + "/" +
                    series.page_title);
  }
  return count;
}

ShareMap traffic_shares(const ElectionGroup& group, const std::map<std::string, double>& window_sums) {
  return normalise(group, window_sums, "page views");
}

ShareMap news_shares(const ElectionGroup& group) {
  std::map<std::string, double> counts;
  for (const auto& obs : group.observations) {
    counts[obs.party_id] = static_cast<double>(obs.news_mentions);
  }
  return normalise(group, counts, "news mentions");
}

WindowSums compute_window_sums(const Dataset& dataset, std::span<const PageViewSeries> series,
                               std::vector<std::string>* notes) {
  std::map<std::pair<std::string, std::string>, const PageViewSeries*> by_page;
  for (const auto& s : series) by_page[{s.wiki_project, s.page_title}] = &s;

  WindowSums sums;
  for (const auto& group : dataset.groups) {
    for (const auto& obs : group.observations) {
      const auto key = key_of(obs);
      if (obs.wiki_views) {
        sums[key] = *obs.wiki_views;
        continue;
      }
      std::vector<PageViewSeries> candidates;
      for (const auto& title : split_titles(obs.wiki_page_title)) {
        auto it = by_page.find({obs.wiki_project, title});
        if (it != by_page.end()) candidates.push_back(*it->second);
      }
      if (candidates.empty()) {
        throw DataError("no page-view series for " + to_string(key) + " (" + obs.wiki_project +
                        "/" + obs.wiki_page_title + ")");
      }
      const auto resolution = resolve_page_variant(candidates, week_before(obs.election_date));
      const auto& chosen = *std::find_if(candidates.begin(), candidates.end(), [&](const auto& c) {
        return c.page_title == resolution.page_title;
      });
      const auto count = window_views(chosen, obs.election_date);
      sums[key] = static_cast<double>(count.views);
      if (notes) {
        for (const auto& w : resolution.warnings) notes->push_back(to_string(key) + ": " + w);
        if (candidates.size() > 1) {
          notes->push_back(to_string(key) + ": using page '" + resolution.page_title + "'");
        }
        if (count.days_covered < count.days_in_window) {
          notes->push_back(fmt::format("{}: window coverage {}/{} days", to_string(key),
                                       count.days_covered, count.days_in_window));
        }
      }
    }
  }
  return sums;
}

std::vector<FeatureRow> build_feature_rows(const Dataset& dataset, const WindowSums& window_sums) {
  std::vector<FeatureRow> rows;
  rows.reserve(dataset.observation_count());
  for (const auto& group : dataset.groups) {
    std::map<std::string, double> group_sums;
    for (const auto& obs : group.observations) {
      auto it = window_sums.find(key_of(obs));
      if (it != window_sums.end()) group_sums[obs.party_id] = it->second;
    }
    ShareMap wiki, news;
    try {
      wiki = traffic_shares(group, group_sums);
      news = news_shares(group);
    } catch (const DataError& e) {
      throw DataError("election " + group_label(group) + ": " + e.what());
    }
    for (const auto& obs : group.observations) {
      rows.push_back(FeatureRow{obs.party_id, obs.country, obs.election_date, wiki.at(obs.party_id),
                                news.at(obs.party_id), obs.is_new ? 1 : 0, obs.is_incumbent ? 1 : 0,
                                obs.vote_share, vote_change(obs)});
    }
  }
  return rows;
}

std::vector<FeatureRow> subset_small(std::span<const FeatureRow> rows, double threshold) {
  std::vector<FeatureRow> out;
  for (const auto& r : rows) {
    if (r.vote_share < threshold) out.push_back(r);
  }
  return out;
}

double relative_change(double old_value, double new_value) {
  if (!(old_value > 0.0)) {
    throw ArgumentError(fmt::format("relative change undefined for old value {}", old_value));
  }
  return (new_value - old_value) / old_value;
}

const std::vector<std::string>& feature_csv_columns() {
  static const std::vector<std::string> columns{
      "party_id",  "country",   "election_date", "wiki_share", "news_share",
      "new_party", "incumbent", "vote_share",    "vote_change"};
  return columns;
}

void write_feature_csv(std::ostream& out, std::span<const FeatureRow> rows) {
  csv::write_record(out, feature_csv_columns());
  for (const auto& r : rows) {
    csv::write_record(out, {r.party_id, r.country, format_date(r.election_date),
                            fmt::format("{}", r.wiki_share), fmt::format("{}", r.news_share),
                            std::to_string(r.new_party), std::to_string(r.incumbent),
                            fmt::format("{}", r.vote_share), fmt::format("{}", r.vote_change)});
  }
}

}  // namespace wikivote
