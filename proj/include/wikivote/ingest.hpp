#pragma once

#include <chrono>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "wikivote/date.hpp"
#include "wikivote/domain.hpp"

namespace wikivote {

// Daily views of one article in one language edition. Days the source does
// not report are absent from `daily`, never zero-filled.
struct PageViewSeries {
  std::string wiki_project;
  std::string page_title;
  std::map<Date, std::int64_t> daily;

  bool operator==(const PageViewSeries&) const = default;
};

struct FetchPolicy {
  int max_in_flight = 4;
  int retry_limit = 3;
  std::chrono::milliseconds backoff_base{500};
  std::string user_agent = "wikivote/0.1 (election page-view research client)";
};

struct PageRequest {
  std::string wiki_project;
  std::string page_title;
  Date start;
  Date end;
};

// Result of one request in a batch: either a series or the captured error.
struct FetchOutcome {
  PageRequest request;
  PageViewSeries series;
  std::exception_ptr error;

  bool ok() const { return !error; }
};

inline constexpr const char* kPageviewsBaseUrlEnv = "WIKIVOTE_PAGEVIEWS_BASE_URL";
inline constexpr const char* kDefaultPageviewsBaseUrl =
    "https://wikimedia.org/api/rest_v1/metrics/pageviews";

// $WIKIVOTE_PAGEVIEWS_BASE_URL when set, else the public Wikimedia endpoint.
std::string pageviews_base_url();

// Per-article daily page-view client. Requests go to
//   {base}/per-article/{project}/all-access/all-agents/{title}/daily/{start}00/{end}00
// and only `items[].timestamp` and `items[].views` of the response are read.
//
// 404 maps to MissingPageError without retrying. 429 and 503 are retried
// with exponential backoff (backoff_base * 2^attempt) up to retry_limit times
// before a NetworkError is raised.
class PageviewClient {
 public:
  explicit PageviewClient(std::string base_url = pageviews_base_url(), FetchPolicy policy = {});

  const FetchPolicy& policy() const { return policy_; }
  const std::string& base_url() const { return base_url_; }

  PageViewSeries fetch(const std::string& project, const std::string& title, Date start,
                       Date end) const;

  // Runs requests on at most policy().max_in_flight worker threads. Outcomes
  // are returned in request order; failures do not abort the batch.
  std::vector<FetchOutcome> fetch_all(std::span<const PageRequest> requests) const;

  // Path (below the base URL) for one request, title already encoded.
  static std::string request_path(const std::string& project, const std::string& title, Date start,
                                  Date end);

 private:
  std::string base_url_;
  std::string origin_;       // scheme://host[:port]
  std::string path_prefix_;  // base path without trailing '/'
  FetchPolicy policy_;
};

PageViewSeries fetch_pageviews(const std::string& project, const std::string& title, Date start,
                               Date end, const FetchPolicy& policy = {});

// Parses a per-article REST response body. Entries outside [start, end] are
// dropped.
PageViewSeries parse_pageviews_response(const std::string& body, const std::string& project,
                                        const std::string& title, DateRange range);

// Page-view CSV: header `wiki_project,page_title,date,views`, one row per
// page-day, any row order. One series per (project, title), first-seen order.
std::vector<PageViewSeries> read_pageviews_csv(std::istream& in, const std::string& source);
std::vector<PageViewSeries> load_pageviews_csv(const std::filesystem::path& path);
void write_pageviews_csv(std::ostream& out, std::span<const PageViewSeries> series);

struct PageResolution {
  std::string page_title;
  std::int64_t window_views = 0;
  std::vector<std::string> warnings;
};

// Picks the candidate with the most views inside `window`; ties go to the
// earliest candidate with a warning. Throws DataError("no signal") when every
// candidate has zero views in the window.
PageResolution resolve_page_variant(std::span<const PageViewSeries> candidates, DateRange window);

// Party dataset CSV. Required columns:
//   country, election_date, party_id, name_english, name_local, abbreviation,
//   is_new, is_incumbent, vote_share, prev_vote_share, news_mentions,
//   wiki_project, wiki_page_title
// An optional `wiki_views` column carries pre-computed week-before views.
std::vector<PartyObservation> read_party_csv(std::istream& in, const std::string& source);
std::vector<PartyObservation> load_party_csv(const std::filesystem::path& path);
void write_party_csv(std::ostream& out, std::span<const PartyObservation> rows);

const std::vector<std::string>& party_csv_columns();

}  // namespace wikivote
