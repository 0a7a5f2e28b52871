#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "support/builders.hpp"
#include "wikivote/error.hpp"
#include "wikivote/features.hpp"
#include "wikivote/ingest.hpp"

using namespace wikivote;
using testing_support::day;
using testing_support::party;

namespace {

ElectionGroup group_of(const std::vector<std::pair<std::string, std::int64_t>>& news) {
  ElectionGroup g{"XX", day(2014, 5, 25), {}};
  for (const auto& [id, n] : news) g.observations.push_back(party("XX", id, 10, 10, n));
  return g;
}

double total(const ShareMap& m) {
  return std::accumulate(m.begin(), m.end(), 0.0, [](double a, const auto& kv) { return a + kv.second; });
}

}  // namespace

TEST_CASE("window_views covers the seven days before polling day") {
  PageViewSeries s{"en.wikipedia", "X", {}};
  for (int d = 18; d <= 24; ++d) s.daily[day(2014, 5, d)] = 100;
  s.daily[day(2014, 5, 25)] = 1'000'000;  // polling day itself is excluded
  s.daily[day(2014, 5, 17)] = 1'000'000;
  auto count = window_views(s, day(2014, 5, 25));
  CHECK(count.views == 700);
  CHECK(count.days_covered == 7);

  s.daily.erase(day(2014, 5, 19));
  s.daily.erase(day(2014, 5, 22));
  count = window_views(s, day(2014, 5, 25));
  CHECK(count.views == 500);
  CHECK(count.days_covered == 5);
  CHECK(count.days_in_window == 7);

  PageViewSeries after{"en.wikipedia", "Y", {{day(2014, 5, 26), 10}}};
  CHECK_THROWS_AS(window_views(after, day(2014, 5, 25)), DataError);
}

TEST_CASE("window_views is additive over disjoint sub-windows") {
  std::mt19937_64 rng(11);
  PageViewSeries s{"en.wikipedia", "X", {}};
  for (int d = 10; d <= 30; ++d) s.daily[day(2014, 5, d)] = static_cast<std::int64_t>(rng() % 5000);
  const auto whole = window_views(s, day(2014, 5, 25)).views;
  const auto week = week_before(day(2014, 5, 25));
  for (int split = 1; split < 7; ++split) {
    std::int64_t left = 0, right = 0;
    for (const auto& [d, v] : s.daily) {
      if (!week.contains(d)) continue;
      (days_between(week.first, d) < split ? left : right) += v;
    }
    CHECK(left + right == whole);
  }
}

TEST_CASE("traffic and news shares") {
  const auto g3 = group_of({{"A", 1}, {"B", 1}, {"C", 1}});
  auto s = traffic_shares(g3, {{"A", 300}, {"B", 100}, {"C", 100}});
  CHECK(s["A"] == doctest::Approx(60));
  CHECK(s["B"] == doctest::Approx(20));
  CHECK(s["C"] == doctest::Approx(20));

  const auto g2 = group_of({{"A", 1}, {"B", 1}});
  s = traffic_shares(g2, {{"A", 1000}, {"B", 0}});
  CHECK(s["A"] == 100.0);
  CHECK(s["B"] == 0.0);

  const auto g4 = group_of({{"A", 1}, {"B", 1}, {"C", 1}, {"D", 1}});
  for (const auto& [id, share] : traffic_shares(g4, {{"A", 7}, {"B", 7}, {"C", 7}, {"D", 7}})) {
    CHECK(share == doctest::Approx(25));
  }

  CHECK(news_shares(group_of({{"A", 50}, {"B", 50}}))["A"] == doctest::Approx(50));
  auto n = news_shares(group_of({{"A", 80}, {"B", 15}, {"C", 5}}));
  CHECK(n["A"] == doctest::Approx(80));
  CHECK(n["B"] == doctest::Approx(15));
  CHECK(n["C"] == doctest::Approx(5));
  try {
    news_shares(group_of({{"A", 0}, {"B", 0}}));
    FAIL("expected zero total error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("zero total") != std::string::npos);
  }
  CHECK_THROWS_AS(traffic_shares(g2, {{"A", 5}}), DataError);
}

TEST_CASE("share properties over random groups") {
  std::mt19937_64 rng(2014);
  std::lognormal_distribution<double> count(6.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + static_cast<int>(rng() % 9);
    std::vector<std::pair<std::string, std::int64_t>> ids;
    std::map<std::string, double> sums;
    for (int i = 0; i < k; ++i) {
      const auto id = "P" + std::to_string(i);
      ids.emplace_back(id, 1);
      sums[id] = std::floor(count(rng));
    }
    sums["P0"] += 1.0;  // keep the total positive
    const auto g = group_of(ids);
    const auto base = traffic_shares(g, sums);
    CHECK(std::abs(total(base) - 100.0) <= 1e-9);

    for (double c : {0.5, 3.0, 1000.0}) {
      auto scaled = sums;
      for (auto& [id, v] : scaled) v *= c;
      const auto shares = traffic_shares(g, scaled);
      for (const auto& [id, v] : base) CHECK(std::abs(shares.at(id) - v) <= 1e-12);
    }

    auto permuted = g;
    std::shuffle(permuted.observations.begin(), permuted.observations.end(), rng);
    CHECK(traffic_shares(permuted, sums) == base);
  }
}

TEST_CASE("build_feature_rows") {
  std::vector<PartyObservation> rows{party("DE", "CDU", 35.3, 37.9, 40, false, true),
                                     party("DE", "AfD", 7.1, std::nullopt, 10, true),
                                     party("DE", "SPD", 27.3, 20.8, 30),
                                     party("FR", "FN", 24.9, 6.3, 20), party("FR", "UMP", 20.8, 27.9, 20)};
  rows[0].wiki_views = 300;
  rows[1].wiki_views = 500;
  rows[2].wiki_views = 200;
  rows[3].wiki_views = 1;
  rows[4].wiki_views = 3;
  const auto dataset = validate_dataset(rows).dataset;
  const auto features = build_feature_rows(dataset, compute_window_sums(dataset, {}));
  REQUIRE(features.size() == 5);

  std::map<std::string, std::pair<double, double>> sums;
  for (const auto& f : features) {
    sums[f.country].first += f.wiki_share;
    sums[f.country].second += f.news_share;
    CHECK((f.new_party == 0 || f.new_party == 1));
    CHECK((f.incumbent == 0 || f.incumbent == 1));
  }
  for (const auto& [c, s] : sums) {
    CHECK(std::abs(s.first - 100.0) <= 1e-9);
    CHECK(std::abs(s.second - 100.0) <= 1e-9);
  }
  const auto afd = *std::find_if(features.begin(), features.end(), [](const auto& f) { return f.party_id == "AfD"; });
  CHECK(afd.new_party == 1);
  CHECK(afd.vote_change == afd.vote_share);
  CHECK(afd.wiki_share == doctest::Approx(50));
}

TEST_CASE("compute_window_sums resolves '|' candidates from series") {
  std::vector<PartyObservation> rows{party("GB", "A", 30, 20, 5), party("GB", "B", 20, 20, 5)};
  rows[0].wiki_page_title = "A short|A long";
  const auto dataset = validate_dataset(rows).dataset;
  std::vector<PageViewSeries> series{{"en.wikipedia", "A short", {{day(2014, 5, 20), 10}}},
                                     {"en.wikipedia", "A long", {{day(2014, 5, 20), 40}}},
                                     {"en.wikipedia", "B", {{day(2014, 5, 21), 60}}}};
  std::vector<std::string> notes;
  const auto sums = compute_window_sums(dataset, series, &notes);
  CHECK(sums.at(ObservationKey{"GB", day(2014, 5, 25), "A"}) == 40);
  CHECK(sums.at(ObservationKey{"GB", day(2014, 5, 25), "B"}) == 60);
  CHECK_FALSE(notes.empty());

  series.pop_back();
  CHECK_THROWS_AS(compute_window_sums(dataset, series), DataError);
}

TEST_CASE("subset_small") {
  std::vector<FeatureRow> rows(4);
  rows[0].vote_share = 14.99;
  rows[1].vote_share = 15.0;
  rows[2].vote_share = 40.0;
  rows[3].vote_share = 0.0;
  const auto small = subset_small(rows);
  REQUIRE(small.size() == 2);
  CHECK(small[0].vote_share == 14.99);
  CHECK(small[1].vote_share == 0.0);
  CHECK(subset_small(rows, 0.0).empty());
  CHECK(subset_small(rows, 100.0) == rows);
  CHECK(subset_small(small) == small);
}

TEST_CASE("relative_change") {
  CHECK(relative_change(700, 980) == doctest::Approx(0.4));
  CHECK(relative_change(3.5, 3.5) == 0.0);
  CHECK_THROWS_AS(relative_change(0, 10), ArgumentError);
}

TEST_CASE("feature CSV keeps the declared column order") {
  std::mt19937_64 rng(1);
  const auto rows = testing_support::synthetic_rows(rng, 1, 3);
  std::ostringstream out;
  write_feature_csv(out, rows);
  const auto text = out.str();
  CHECK(text.substr(0, text.find('\n')) ==
        "party_id,country,election_date,wiki_share,news_share,new_party,incumbent,vote_share,vote_change");
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
}
