#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "wikivote/error.hpp"
#include "wikivote/ingest.hpp"

namespace wikivote {

namespace {

std::string encode_title(const std::string& title) {
  std::string underscored = title;
  std::replace(underscored.begin(), underscored.end(), ' ', '_');
  return httplib::detail::encode_query_param(underscored);
}

Date parse_timestamp(const std::string& ts) {
  // YYYYMMDDHH
  if (ts.size() < 8) throw DataError("malformed page-view timestamp '" + ts + "'");
  return parse_date(ts.substr(0, 4) + "-" + ts.substr(4, 2) + "-" + ts.substr(6, 2));
}

bool retryable(int status) { return status == 429 || status == 503; }

}  // namespace

std::string pageviews_base_url() {
  if (const char* env = std::getenv(kPageviewsBaseUrlEnv); env && *env) return env;
  return kDefaultPageviewsBaseUrl;
}

PageviewClient::PageviewClient(std::string base_url, FetchPolicy policy)
    : base_url_(std::move(base_url)), policy_(std::move(policy)) {
  if (policy_.max_in_flight < 1) throw ArgumentError("max_in_flight must be >= 1");
  if (policy_.retry_limit < 0) throw ArgumentError("retry_limit must be >= 0");
  const auto scheme_end = base_url_.find("://");
  if (scheme_end == std::string::npos) {
    throw ArgumentError("page-view base URL needs a scheme: '" + base_url_ + "'");
  }
  const auto path_begin = base_url_.find('/', scheme_end + 3);
  origin_ = base_url_.substr(0, path_begin);
  path_prefix_ = path_begin == std::string::npos ? std::string{} : base_url_.substr(path_begin);
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
}

std::string PageviewClient::request_path(const std::string& project, const std::string& title,
                                         Date start, Date end) {
  return "/per-article/" + project + "/all-access/all-agents/" + encode_title(title) + "/daily/" +
         format_date_compact(start) + "00/" + format_date_compact(end) + "00";
}

PageViewSeries PageviewClient::fetch(const std::string& project, const std::string& title,
                                     Date start, Date end) const {
  if (title.empty()) throw ArgumentError("page title must be non-empty");
  if (project.empty()) throw ArgumentError("wiki project must be non-empty");
  if (end < start) {
    throw ArgumentError("empty date range " + format_date(start) + " > " + format_date(end));
  }

  httplib::Client client(origin_);
  if (!client.is_valid()) throw NetworkError("unsupported page-view base URL '" + base_url_ + "'");
  client.set_url_encode(false);
  client.set_follow_location(true);
  client.set_connection_timeout(10);
  client.set_read_timeout(30);
  const httplib::Headers headers{{"User-Agent", policy_.user_agent},
                                 {"Accept", "application/json"}};
  const auto path = path_prefix_ + request_path(project, title, start, end);

  for (int attempt = 0;; ++attempt) {
    auto res = client.Get(path, headers);
    if (!res) {
      throw NetworkError("request for " + project + "/" + title +
                         " failed: " + httplib::to_string(res.error()));
    }
    if (res->status == 200) {
      return parse_pageviews_response(res->body, project, title, DateRange{start, end});
    }
    if (res->status == 404) {
      throw MissingPageError("missing page: " + project + "/" + title);
    }
    if (retryable(res->status) && attempt < policy_.retry_limit) {
      std::this_thread::sleep_for(policy_.backoff_base * (1LL << attempt));
      continue;
    }
    if (retryable(res->status)) {
      throw NetworkError("rate limited fetching " + project + "/" + title + " after " +
                         std::to_string(attempt) + " retries (HTTP " +
                         std::to_string(res->status) + ")");
    }
    throw NetworkError("HTTP " + std::to_string(res->status) + " fetching " + project + "/" + title);
  }
}

std::vector<FetchOutcome> PageviewClient::fetch_all(std::span<const PageRequest> requests) const {
  std::vector<FetchOutcome> outcomes(requests.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < requests.size(); i = next++) {
      auto& out = outcomes[i];
      out.request = requests[i];
      try {
        out.series = fetch(requests[i].wiki_project, requests[i].page_title, requests[i].start,
                           requests[i].end);
      } catch (...) {
        out.error = std::current_exception();
      }
    }
  };
  const auto n_workers =
      std::min<std::size_t>(static_cast<std::size_t>(policy_.max_in_flight), requests.size());
  {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }
  return outcomes;
}

PageViewSeries fetch_pageviews(const std::string& project, const std::string& title, Date start,
                               Date end, const FetchPolicy& policy) {
  return PageviewClient(pageviews_base_url(), policy).fetch(project, title, start, end);
}

PageViewSeries parse_pageviews_response(const std::string& body, const std::string& project,
                                        const std::string& title, DateRange range) {
  PageViewSeries series{project, title, {}};
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("page-view response for " + project + "/" + title + " is not JSON: " + e.what());
  }
  if (!doc.contains("items") || !doc["items"].is_array()) {
    throw DataError("page-view response for " + project + "/" + title + " has no items array");
  }
  for (const auto& item : doc["items"]) {
    if (!item.contains("timestamp") || !item.contains("views") ||
        !item["timestamp"].is_string() || !item["views"].is_number_integer()) {
      throw DataError("malformed page-view item in response for " + project + "/" + title);
    }
    const auto day = parse_timestamp(item["timestamp"].get<std::string>());
    const auto views = item["views"].get<std::int64_t>();
    if (views < 0) throw DataError("negative view count in response for " + project + "/" + title);
    if (!range.contains(day)) continue;
    if (!series.daily.emplace(day, views).second) {
      throw DataError("duplicate day " + format_date(day) + " in response for " + project + "/" +
                      title);
    }
  }
  return series;
}

}  // namespace wikivote
