#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wikivote/domain.hpp"
#include "wikivote/features.hpp"
#include "wikivote/linalg.hpp"
#include "wikivote/stats.hpp"

namespace testing_support {

inline wikivote::Date day(int y, unsigned m, unsigned d) {
  return wikivote::Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
}

inline wikivote::PartyObservation party(std::string country, std::string id, double vote,
                                        std::optional<double> prev, std::int64_t news,
                                        bool is_new = false, bool incumbent = false,
                                        wikivote::Date date = day(2014, 5, 25)) {
  wikivote::PartyObservation p;
  p.country = std::move(country);
  p.election_date = date;
  p.party_id = id;
  p.name_english = id;
  p.name_local = id;
  p.abbreviation = id;
  p.is_new = is_new;
  p.is_incumbent = incumbent;
  p.vote_share = vote;
  p.prev_vote_share = prev;
  p.news_mentions = news;
  p.wiki_project = "en.wikipedia";
  p.wiki_page_title = id;
  return p;
}

inline wikivote::Matrix to_matrix(const oracle::Rows& rows) {
  wikivote::Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

inline wikivote::DesignMatrix to_design(const oracle::Rows& rows) {
  std::vector<std::string> names{"Intercept"};
  for (std::size_t c = 1; c < rows.front().size(); ++c) names.push_back("x" + std::to_string(c));
  return wikivote::DesignMatrix(to_matrix(rows), names);
}

// Synthetic feature rows shaped like the election dataset: `groups` elections
// of `per_group` parties with lognormal news/page-view weights.
inline std::vector<wikivote::FeatureRow> synthetic_rows(std::mt19937_64& rng, int groups,
                                                        int per_group) {
  std::lognormal_distribution<double> weight(0.0, 0.9);
  std::normal_distribution<double> noise(0.0, 3.0);
  std::vector<wikivote::FeatureRow> rows;
  for (int g = 0; g < groups; ++g) {
    std::vector<double> news(per_group), wiki(per_group);
    double news_total = 0, wiki_total = 0;
    for (int i = 0; i < per_group; ++i) {
      news[i] = weight(rng);
      wiki[i] = news[i] * weight(rng);
      news_total += news[i];
      wiki_total += wiki[i];
    }
    for (int i = 0; i < per_group; ++i) {
      wikivote::FeatureRow r;
      r.country = "C" + std::to_string(g);
      r.election_date = day(2014, 5, 25);
      r.party_id = r.country + "-" + std::to_string(i);
      r.news_share = 100.0 * news[i] / news_total;
      r.wiki_share = 100.0 * wiki[i] / wiki_total;
      r.new_party = i == per_group - 1 ? 1 : 0;
      r.incumbent = (i == 0 || (i == 1 && g % 2 == 0)) ? 1 : 0;
      r.vote_share = std::clamp(0.8 * r.news_share + noise(rng), 0.1, 90.0);
      r.vote_change = r.new_party ? r.vote_share : noise(rng);
      rows.push_back(r);
    }
  }
  return rows;
}

}  // namespace testing_support
