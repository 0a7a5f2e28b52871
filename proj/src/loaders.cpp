#include <fstream>
#include <map>

#include <fmt/format.h>

#include "wikivote/csv.hpp"
#include "wikivote/error.hpp"
#include "wikivote/ingest.hpp"

namespace wikivote {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "' for reading");
  return in;
}

void require_columns(const csv::Reader& reader, const std::vector<std::string>& required) {
  const auto missing = reader.missing_columns(required);
  if (missing.empty()) return;
  std::string list;
  for (const auto& name : missing) list += (list.empty() ? "" : ", ") + name;
  throw DataError(reader.source() + ": missing column(s): " + list);
}

// Shortest round-trip representation.
std::string format_number(double v) { return fmt::format("{}", v); }

}  // namespace

// --- page views -------------------------------------------------------------

std::vector<PageViewSeries> read_pageviews_csv(std::istream& in, const std::string& source) {
  csv::Reader reader(in, source);
  require_columns(reader, {"wiki_project", "page_title", "date", "views"});

  std::vector<PageViewSeries> series;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  while (reader.next()) {
    const auto& project = reader.field("wiki_project");
    const auto& title = reader.field("page_title");
    if (project.empty() || title.empty()) reader.fail("empty wiki_project or page_title");
    Date day;
    try {
      day = parse_date(reader.field("date"));
    } catch (const DataError& e) {
      reader.fail(e.what());
    }
    const auto views = reader.integer("views");
    if (views < 0) reader.fail("negative view count " + std::to_string(views));

    auto [it, inserted] = index.try_emplace({project, title}, series.size());
    if (inserted) series.push_back(PageViewSeries{project, title, {}});
    if (!series[it->second].daily.emplace(day, views).second) {
      reader.fail("duplicate day " + format_date(day) + " for " + project + "/" + title);
    }
  }
  return series;
}

std::vector<PageViewSeries> load_pageviews_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_pageviews_csv(in, path.string());
}

void write_pageviews_csv(std::ostream& out, std::span<const PageViewSeries> series) {
  csv::write_record(out, {"wiki_project", "page_title", "date", "views"});
  for (const auto& s : series) {
    for (const auto& [day, views] : s.daily) {
      csv::write_record(out, {s.wiki_project, s.page_title, format_date(day), std::to_string(views)});
    }
  }
}

PageResolution resolve_page_variant(std::span<const PageViewSeries> candidates, DateRange window) {
  if (candidates.empty()) throw ArgumentError("resolve_page_variant needs at least one candidate");
  if (window.last < window.first) throw ArgumentError("empty resolution window");

  PageResolution best;
  std::size_t best_index = 0;
  std::vector<std::size_t> tied;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    std::int64_t sum = 0;
    for (auto it = candidates[i].daily.lower_bound(window.first);
         it != candidates[i].daily.end() && it->first <= window.last; ++it) {
      sum += it->second;
    }
    if (i == 0 || sum > best.window_views) {
      best.window_views = sum;
      best_index = i;
      tied.clear();
    } else if (sum == best.window_views) {
      tied.push_back(i);
    }
  }
  if (best.window_views == 0) {
    throw DataError("no signal: every candidate page has zero views between " +
                    format_date(window.first) + " and " + format_date(window.last));
  }
  best.page_title = candidates[best_index].page_title;
  for (auto i : tied) {
    best.warnings.push_back(fmt::format("page '{}' ties '{}' at {} views; keeping the first",
                                        candidates[i].page_title, best.page_title,
                                        best.window_views));
  }
  return best;
}

// --- party dataset ----------------------------------------------------------

const std::vector<std::string>& party_csv_columns() {
  static const std::vector<std::string> columns{
      "country",      "election_date", "party_id",        "name_english",  "name_local",
      "abbreviation", "is_new",        "is_incumbent",    "vote_share",    "prev_vote_share",
      "news_mentions", "wiki_project", "wiki_page_title"};
  return columns;
}

std::vector<PartyObservation> read_party_csv(std::istream& in, const std::string& source) {
  csv::Reader reader(in, source);
  require_columns(reader, party_csv_columns());
  const bool has_views = reader.has_column("wiki_views");

  std::vector<PartyObservation> rows;
  while (reader.next()) {
    PartyObservation obs;
    obs.country = reader.field("country");
    try {
      obs.election_date = parse_date(reader.field("election_date"));
    } catch (const DataError& e) {
      reader.fail(e.what());
    }
    obs.party_id = reader.field("party_id");
    obs.name_english = reader.field("name_english");
    obs.name_local = reader.field("name_local");
    obs.abbreviation = reader.field("abbreviation");
    obs.is_new = reader.flag("is_new");
    obs.is_incumbent = reader.flag("is_incumbent");
    obs.vote_share = reader.number("vote_share");
    obs.prev_vote_share = reader.optional_number("prev_vote_share");
    obs.news_mentions = reader.integer("news_mentions");
    obs.wiki_project = reader.field("wiki_project");
    obs.wiki_page_title = reader.field("wiki_page_title");
    if (has_views) obs.wiki_views = reader.optional_number("wiki_views");
    rows.push_back(std::move(obs));
  }
  return rows;
}

std::vector<PartyObservation> load_party_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_party_csv(in, path.string());
}

void write_party_csv(std::ostream& out, std::span<const PartyObservation> rows) {
  auto header = party_csv_columns();
  bool any_views = false;
  for (const auto& r : rows) any_views = any_views || r.wiki_views.has_value();
  if (any_views) header.push_back("wiki_views");
  csv::write_record(out, header);
  for (const auto& r : rows) {
    std::vector<std::string> fields{r.country,
                                    format_date(r.election_date),
                                    r.party_id,
                                    r.name_english,
                                    r.name_local,
                                    r.abbreviation,
                                    r.is_new ? "1" : "0",
                                    r.is_incumbent ? "1" : "0",
                                    format_number(r.vote_share),
                                    r.prev_vote_share ? format_number(*r.prev_vote_share) : "",
                                    std::to_string(r.news_mentions),
                                    r.wiki_project,
                                    r.wiki_page_title};
    if (any_views) fields.push_back(r.wiki_views ? format_number(*r.wiki_views) : "");
    csv::write_record(out, fields);
  }
}

}  // namespace wikivote
