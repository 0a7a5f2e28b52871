#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "wikivote/cli.hpp"
#include "wikivote/csv.hpp"
#include "wikivote/error.hpp"

namespace wikivote::cli {

namespace {

using ojson = nlohmann::ordered_json;

struct LoadedFeatures {
  Dataset dataset;
  std::vector<FeatureRow> rows;
  std::vector<std::string> notes;
};

LoadedFeatures load_features(const RunConfig& config) {
  if (config.dataset_path.empty()) throw ArgumentError("--dataset is required");
  ValidationOptions options;
  options.provenance = config.dataset_path.filename().string();
  if (config.strict_inclusion) options.comparator = InclusionComparator::strictly_greater;
  auto validated = validate_dataset(load_party_csv(config.dataset_path), options);

  std::vector<PageViewSeries> series;
  if (!config.pageviews_path.empty()) series = load_pageviews_csv(config.pageviews_path);

  LoadedFeatures out;
  out.notes = std::move(validated.warnings);
  const auto sums = compute_window_sums(validated.dataset, series, &out.notes);
  out.rows = build_feature_rows(validated.dataset, sums);
  out.dataset = std::move(validated.dataset);
  return out;
}

std::vector<ModelSpec> requested_specs(const RunConfig& config) {
  if (config.model_ids.empty()) return all_model_specs();
  std::vector<ModelSpec> specs;
  for (const auto& id : config.model_ids) specs.push_back(model_spec(id));
  return specs;
}

// Two decimals; a value that rounds to zero prints without a sign.
std::string two_decimals(double v) {
  auto s = fmt::format("{:.2f}", v);
  if (s == "-0.00") s = "0.00";
  return s;
}

std::size_t display_width(std::string_view s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::string pad(std::string_view s, std::size_t width) {
  std::string out(s);
  const auto w = display_width(s);
  if (w < width) out.append(width - w, ' ');
  return out;
}

std::string render_rows(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    widths.resize(std::max(widths.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], display_width(row[c]));
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line += c + 1 == row.size() ? row[c] : pad(row[c], widths[c] + 3);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + '\n';
  }
  return out;
}

std::vector<std::string> term_order(std::span<const ModelReport> reports) {
  std::vector<std::string> order;
  bool any_wiki = false;
  for (const auto& r : reports) any_wiki = any_wiki || r.spec.include_wikipedia;
  ModelSpec widest;
  widest.include_wikipedia = any_wiki;
  for (auto& name : design_column_names(widest)) order.push_back(std::move(name));
  return order;
}

const TermEstimate* find_term(const ModelReport& report, const std::string& name) {
  for (const auto& t : report.fit.terms) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

std::string to_csv(const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  for (const auto& row : rows) csv::write_record(out, row);
  return out.str();
}

std::string number(double v) { return fmt::format("{}", v); }

ojson correlation_json(const CorrelationResult& c) {
  return ojson{{"r", c.r}, {"n", c.n}, {"p_value", c.p_value}, {"adj_r2", c.adj_r2}};
}

const char* sides_name(Sides s) { return s == Sides::two ? "two" : "one"; }

}  // namespace

std::string format_cell(const TermEstimate& term) {
  return two_decimals(term.beta) + term.stars + " (" + two_decimals(term.se) + ")";
}

std::string render_text_table(std::span<const ModelReport> reports) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{""};
  for (const auto& r : reports) header.push_back("Model " + r.spec.id);
  rows.push_back(header);
  for (const auto& name : term_order(reports)) {
    std::vector<std::string> row{name};
    for (const auto& r : reports) {
      const auto* t = find_term(r, name);
      row.push_back(t ? format_cell(*t) : "");
    }
    rows.push_back(std::move(row));
  }
  std::vector<std::string> r2{"R²"}, adj{"Adjusted R²"}, n{"N"};
  for (const auto& r : reports) {
    r2.push_back(two_decimals(r.fit.r2));
    adj.push_back(two_decimals(r.fit.adj_r2));
    n.push_back(std::to_string(r.fit.n));
  }
  rows.push_back(std::move(r2));
  rows.push_back(std::move(adj));
  rows.push_back(std::move(n));
  return render_rows(rows);
}

std::string render_csv_table(std::span<const ModelReport> reports) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"term"};
  for (const auto& r : reports) {
    for (const char* field : {"beta", "se", "p", "stars"}) header.push_back(r.spec.id + "_" + field);
  }
  rows.push_back(header);
  for (const auto& name : term_order(reports)) {
    std::vector<std::string> row{name};
    for (const auto& r : reports) {
      if (const auto* t = find_term(r, name)) {
        row.insert(row.end(), {number(t->beta), number(t->se), number(t->p_value), t->stars});
      } else {
        row.insert(row.end(), {"", "", "", ""});
      }
    }
    rows.push_back(std::move(row));
  }
  for (const char* stat : {"r2", "adj_r2", "n"}) {
    std::vector<std::string> row{stat};
    for (const auto& r : reports) {
      const std::string v = std::string(stat) == "r2"       ? number(r.fit.r2)
                            : std::string(stat) == "adj_r2" ? number(r.fit.adj_r2)
                                                            : std::to_string(r.fit.n);
      row.insert(row.end(), {v, "", "", ""});
    }
    rows.push_back(std::move(row));
  }
  return to_csv(rows);
}

CommandResult cmd_fit(const RunConfig& config) {
  const auto specs = requested_specs(config);
  const auto loaded = load_features(config);

  std::vector<ModelReport> reports;
  for (const auto& spec : specs) reports.push_back(fit_model(loaded.rows, spec));

  CommandResult result;
  ojson combined = ojson::array();
  for (const auto& r : reports) {
    result.files.push_back({"model_" + r.spec.id + ".json", to_json(r).dump(2) + "\n"});
    combined.push_back(to_json(r));
  }
  const auto text = render_text_table(reports);
  switch (config.format) {
    case Format::json:
      result.files.push_back({"table.json", ojson{{"models", combined}}.dump(2) + "\n"});
      break;
    case Format::csv:
      result.files.push_back({"table.csv", render_csv_table(reports)});
      break;
    case Format::text:
      result.files.push_back({"table.txt", text});
      break;
  }
  result.summary = text;
  for (const auto& note : loaded.notes) result.summary += "note: " + note + "\n";
  for (const auto& r : reports) {
    for (const auto& w : r.warnings) result.summary += "warning: " + w + "\n";
  }
  return result;
}

CommandResult cmd_features(const RunConfig& config) {
  const auto loaded = load_features(config);
  std::ostringstream out;
  write_feature_csv(out, loaded.rows);
  CommandResult result;
  result.files.push_back({"features.csv", out.str()});
  result.summary = fmt::format("{} feature rows over {} elections (week window: 7 days before "
                               "polling day, polling day excluded)\n",
                               loaded.rows.size(), loaded.dataset.groups.size());
  for (const auto& note : loaded.notes) result.summary += "note: " + note + "\n";
  return result;
}

CommandResult cmd_predict(const RunConfig& config, const std::string& model_id,
                          const std::filesystem::path& scenario_csv,
                          const std::filesystem::path& report_json, bool normalize) {
  const auto& spec = model_spec(model_id);

  // Training rows give both the fit (unless a saved report is supplied) and
  // the covariate ranges for the extrapolation flag.
  const auto loaded = load_features(config);
  const auto design = build_design_matrix(loaded.rows, spec);
  ModelReport report;
  if (!report_json.empty()) {
    std::ifstream in(report_json);
    if (!in) throw DataError("cannot open '" + report_json.string() + "' for reading");
    try {
      report = model_report_from_json(ojson::parse(in));
    } catch (const ojson::parse_error& e) {
      throw DataError("'" + report_json.string() + "' is not JSON: " + e.what());
    }
    if (report.spec.id != spec.id) {
      throw ArgumentError("report is for model " + report.spec.id + ", not " + spec.id);
    }
  } else {
    report = fit_model(loaded.rows, spec);
  }

  std::ifstream file(scenario_csv);
  if (!file) throw DataError("cannot open '" + scenario_csv.string() + "' for reading");
  std::stringstream in;
  in << file.rdbuf();
  CommandResult result;
  if (in.str().find_first_not_of(" \t\r\n") == std::string::npos) {
    result.files.push_back(
        {"predictions.csv", normalize ? "party_id,predicted,flags,normalized\n" : "party_id,predicted,flags\n"});
    result.summary = "empty scenario: 0 predictions\n";
    return result;
  }
  csv::Reader reader(in, scenario_csv.string());
  std::vector<std::string> required{"party_id", "news_share", "new_party", "incumbent"};
  if (spec.include_wikipedia) required.push_back("wiki_share");
  if (const auto missing = reader.missing_columns(required); !missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw DataError(scenario_csv.string() + ": missing column(s) for model " + spec.id + ": " + list);
  }
  std::vector<FeatureRow> scenario;
  while (reader.next()) {
    FeatureRow row;
    row.party_id = reader.field("party_id");
    if (reader.has_column("country")) row.country = reader.field("country");
    if (reader.has_column("election_date") && !reader.field("election_date").empty()) {
      try {
        row.election_date = parse_date(reader.field("election_date"));
      } catch (const DataError& e) {
        reader.fail(e.what());
      }
    }
    row.news_share = reader.number("news_share");
    row.new_party = reader.flag("new_party") ? 1 : 0;
    row.incumbent = reader.flag("incumbent") ? 1 : 0;
    row.wiki_share = spec.include_wikipedia ? reader.number("wiki_share") : std::nan("");
    scenario.push_back(std::move(row));
  }

  auto range_of = [&](auto member) {
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& r : design.rows) {
      lo = std::min(lo, r.*member);
      hi = std::max(hi, r.*member);
    }
    return std::pair{lo, hi};
  };
  const auto news_range = range_of(&FeatureRow::news_share);
  const auto wiki_range = range_of(&FeatureRow::wiki_share);

  const auto predictions = predict(report, scenario);
  std::vector<double> normalized;
  if (normalize) normalized = normalize_within_groups(predictions, scenario, spec);
  std::vector<std::vector<std::string>> rows{{"party_id", "predicted", "flags"}};
  if (normalize) rows[0].emplace_back("normalized");
  std::size_t flagged = 0;
  for (std::size_t i = 0; i < scenario.size(); ++i) {
    const auto& s = scenario[i];
    std::vector<std::string> flags;
    if (predictions.out_of_range[i]) flags.emplace_back("out_of_range");
    const bool extrapolated =
        s.news_share < news_range.first || s.news_share > news_range.second ||
        (spec.include_wikipedia && (s.wiki_share < wiki_range.first || s.wiki_share > wiki_range.second));
    if (extrapolated) flags.emplace_back("extrapolation");
    std::string joined;
    for (const auto& f : flags) joined += (joined.empty() ? "" : ";") + f;
    flagged += flags.empty() ? 0 : 1;
    rows.push_back({s.party_id, number(predictions.values[i]), joined});
    if (normalize) rows.back().push_back(number(normalized[i]));
  }

  result.files.push_back({"predictions.csv", to_csv(rows)});
  result.summary = fmt::format("{} predictions from model {} ({} flagged)\n", scenario.size(),
                               spec.id, flagged);
  for (const auto& w : predictions.warnings) result.summary += "warning: " + w + "\n";
  return result;
}

CommandResult cmd_turnout(const RunConfig& config, const std::filesystem::path& turnout_csv) {
  const auto records = load_turnout_csv(turnout_csv);
  const auto analysis = turnout_analysis(records, config.significance_sides);

  ojson recs = ojson::array();
  ojson outliers = ojson::array();
  std::vector<std::vector<std::string>> table{
      {"language_edition", "views_change", "turnout_change", "outlier", "studentized_residual"}};
  for (const auto& r : analysis.records) {
    recs.push_back(ojson{{"language_edition", r.language_edition},
                         {"views_change", r.views_change},
                         {"turnout_change", r.turnout_change},
                         {"outlier", r.outlier},
                         {"studentized_residual", r.studentized_residual}});
    if (r.outlier) outliers.push_back(r.language_edition);
    table.push_back({r.language_edition, number(r.views_change), number(r.turnout_change),
                     r.outlier ? "1" : "0", number(r.studentized_residual)});
  }
  auto corr = correlation_json(analysis.correlation);
  corr["sides"] = sides_name(config.significance_sides);
  const ojson doc{{"records", recs}, {"excluded", outliers}, {"correlation", corr}};

  CommandResult result;
  result.files.push_back({"turnout.json", doc.dump(2) + "\n"});
  if (config.format == Format::csv) result.files.push_back({"turnout.csv", to_csv(table)});

  std::vector<std::vector<std::string>> text_rows{
      {"edition", "views change", "turnout change", "outlier", "stud. resid."}};
  for (const auto& r : analysis.records) {
    text_rows.push_back({r.language_edition, two_decimals(r.views_change),
                         two_decimals(r.turnout_change), r.outlier ? "yes" : "",
                         two_decimals(r.studentized_residual)});
  }
  result.summary = render_rows(text_rows) +
                   fmt::format("R = {} (Adjusted R^2 {}, p-value = {:.3g}, {}-sided), n = {}, {} excluded\n",
                               two_decimals(analysis.correlation.r),
                               two_decimals(analysis.correlation.adj_r2),
                               analysis.correlation.p_value, sides_name(config.significance_sides),
                               analysis.correlation.n, analysis.excluded);
  if (config.format == Format::text) result.files.push_back({"turnout.txt", result.summary});
  return result;
}

CommandResult cmd_attention(const RunConfig& config, const AttentionRequest& request) {
  if (config.pageviews_path.empty()) throw ArgumentError("--pageviews is required");
  if (!request.election_date && request.election_dates_csv.empty()) {
    throw ArgumentError("pass --election-date or --election-dates");
  }
  const auto series = load_pageviews_csv(config.pageviews_path);

  // (project, title) overrides first, then project-wide dates.
  std::map<std::pair<std::string, std::string>, Date> dates;
  if (!request.election_dates_csv.empty()) {
    std::ifstream in(request.election_dates_csv);
    if (!in) throw DataError("cannot open '" + request.election_dates_csv.string() + "'");
    csv::Reader reader(in, request.election_dates_csv.string());
    if (!reader.has_column("wiki_project") || !reader.has_column("election_date")) {
      throw DataError(reader.source() + ": need columns wiki_project,election_date");
    }
    const bool by_title = reader.has_column("page_title");
    while (reader.next()) {
      Date d;
      try {
        d = parse_date(reader.field("election_date"));
      } catch (const DataError& e) {
        reader.fail(e.what());
      }
      dates[{reader.field("wiki_project"), by_title ? reader.field("page_title") : ""}] = d;
    }
  }
  auto date_for = [&](const PageViewSeries& s) -> std::optional<Date> {
    if (auto it = dates.find({s.wiki_project, s.page_title}); it != dates.end()) return it->second;
    if (auto it = dates.find({s.wiki_project, ""}); it != dates.end()) return it->second;
    return request.election_date;
  };

  ojson items = ojson::array();
  std::vector<std::vector<std::string>> plot{{"series_id", "date", "views", "log_views"}};
  std::size_t ok = 0;
  std::string failures;
  for (const auto& s : series) {
    const auto id = s.wiki_project + "/" + s.page_title;
    for (const auto& [day, views] : s.daily) {
      plot.push_back({id, format_date(day), std::to_string(views),
                      views > 0 ? number(std::log(static_cast<double>(views))) : ""});
    }
    const auto election = date_for(s);
    ojson item{{"series_id", id}};
    if (!election) {
      item["status"] = "failed";
      item["error"] = "no election date for this series";
    } else {
      item["election_date"] = format_date(*election);
      try {
        const auto d = attention_dynamics(s, *election, config.window_days);
        item["status"] = "ok";
        item["peak_date"] = format_date(d.peak_date);
        item["peak_views"] = d.peak_views;
        item["lambda_up"] = d.lambda_up;
        item["lambda_down"] = d.lambda_down;
        item["fit_quality_up"] = d.fit_quality_up;
        item["fit_quality_down"] = d.fit_quality_down;
        item["days_up"] = d.days_up;
        item["days_down"] = d.days_down;
        ++ok;
      } catch (const DataError& e) {
        item["status"] = "failed";
        item["error"] = e.what();
      }
    }
    if (item["status"] == "failed") {
      failures += "failed: " + id + ": " + item["error"].get<std::string>() + "\n";
    }
    items.push_back(std::move(item));
  }

  CommandResult result;
  result.files.push_back(
      {"attention.json", ojson{{"window_days", config.window_days}, {"series", items}}.dump(2) + "\n"});
  result.files.push_back({"attention_plot.csv", to_csv(plot)});
  result.summary = fmt::format("{} series, {} fitted, {} failed\n", series.size(), ok,
                               series.size() - ok) +
                   failures;
  if (ok == 0) {
    // Nothing usable: report as a data error but keep the itemised failures.
    throw DataError("attention: no series could be fitted\n" + failures);
  }
  return result;
}

CommandResult cmd_report(const RunConfig& config) {
  const auto loaded = load_features(config);
  std::map<ObservationKey, const PartyObservation*> by_key;
  for (const auto& g : loaded.dataset.groups) {
    for (const auto& o : g.observations) by_key[key_of(o)] = &o;
  }

  std::vector<std::vector<std::string>> shares{{"country", "election_date", "party_id",
                                                "abbreviation", "wiki_share", "news_share",
                                                "vote_share", "vote_change", "new_party",
                                                "incumbent"}};
  for (const auto& r : loaded.rows) {
    const auto* obs = by_key.at(ObservationKey{r.country, r.election_date, r.party_id});
    shares.push_back({r.country, format_date(r.election_date), r.party_id, obs->abbreviation,
                      number(r.wiki_share), number(r.news_share), number(r.vote_share),
                      number(r.vote_change), std::to_string(r.new_party),
                      std::to_string(r.incumbent)});
  }

  auto column = [](const std::vector<FeatureRow>& rows, double FeatureRow::*m) {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(r.*m);
    return v;
  };
  auto correlate = [&](const std::vector<FeatureRow>& rows, double FeatureRow::*x,
                       double FeatureRow::*y) -> ojson {
    try {
      return correlation_json(pearson(column(rows, x), column(rows, y), config.significance_sides));
    } catch (const Error& e) {
      return ojson{{"error", e.what()}, {"n", rows.size()}};
    }
  };
  const auto small = subset_small(loaded.rows);
  std::vector<FeatureRow> incumbents, newcomers;
  for (const auto& r : loaded.rows) {
    if (r.incumbent) incumbents.push_back(r);
    if (r.new_party) newcomers.push_back(r);
  }
  auto means = [&](const std::vector<FeatureRow>& rows) -> ojson {
    if (rows.empty()) return ojson{{"n", 0}};
    double news = 0.0, wiki = 0.0;
    for (const auto& r : rows) {
      news += r.news_share;
      wiki += r.wiki_share;
    }
    const double n = static_cast<double>(rows.size());
    return ojson{{"n", rows.size()}, {"mean_news_share", news / n}, {"mean_wiki_share", wiki / n}};
  };

  const ojson doc{
      {"sides", sides_name(config.significance_sides)},
      {"wiki_vs_vote", correlate(loaded.rows, &FeatureRow::wiki_share, &FeatureRow::vote_share)},
      {"news_vs_vote", correlate(loaded.rows, &FeatureRow::news_share, &FeatureRow::vote_share)},
      {"news_vs_vote_small", correlate(small, &FeatureRow::news_share, &FeatureRow::vote_share)},
      {"news_vs_wiki", correlate(loaded.rows, &FeatureRow::news_share, &FeatureRow::wiki_share)},
      {"clusters", ojson{{"incumbent", means(incumbents)}, {"new", means(newcomers)}}},
  };

  CommandResult result;
  result.files.push_back({"traffic_shares.csv", to_csv(shares)});
  result.files.push_back({"correlations.json", doc.dump(2) + "\n"});

  std::vector<std::vector<std::string>> text{{"election", "party", "wiki share", "news share", "vote share"}};
  for (std::size_t i = 1; i < shares.size(); ++i) {
    const auto& r = loaded.rows[i - 1];
    text.push_back({r.country + " " + format_date(r.election_date),
                    shares[i][3].empty() ? r.party_id : shares[i][3], two_decimals(r.wiki_share),
                    two_decimals(r.news_share), two_decimals(r.vote_share)});
  }
  result.summary = render_rows(text);
  for (const char* key : {"wiki_vs_vote", "news_vs_vote", "news_vs_vote_small", "news_vs_wiki"}) {
    const auto& c = doc[key];
    if (c.contains("error")) {
      result.summary += fmt::format("{}: {}\n", key, c["error"].get<std::string>());
    } else {
      result.summary += fmt::format("{}: R = {} (Adjusted R^2 {}, p-value = {:.3g}), n = {}\n", key,
                                    two_decimals(c["r"].get<double>()),
                                    two_decimals(c["adj_r2"].get<double>()),
                                    c["p_value"].get<double>(), c["n"].get<std::size_t>());
    }
  }
  if (config.format == Format::text) result.files.push_back({"report.txt", result.summary});
  return result;
}

CommandResult cmd_ingest(const RunConfig& config, const IngestRequest& request) {
  CommandResult result;
  if (!request.project.empty() || !request.title.empty()) {
    if (request.project.empty() || request.title.empty() || !request.start || !request.end) {
      throw ArgumentError("single-page ingest needs --project, --title, --start and --end");
    }
    const PageviewClient client(pageviews_base_url(), request.policy);
    const auto s = client.fetch(request.project, request.title, *request.start, *request.end);
    std::ostringstream out;
    const std::vector<PageViewSeries> one{s};
    write_pageviews_csv(out, one);
    result.files.push_back({"pageviews.csv", out.str()});
    result.summary = fmt::format("{}/{}: {} days\n", s.wiki_project, s.page_title, s.daily.size());
    return result;
  }

  if (config.dataset_path.empty()) throw ArgumentError("--dataset or --project/--title is required");
  ValidationOptions options;
  options.provenance = config.dataset_path.filename().string();
  if (config.strict_inclusion) options.comparator = InclusionComparator::strictly_greater;
  const auto validated = validate_dataset(load_party_csv(config.dataset_path), options);
  const auto& dataset = validated.dataset;

  ojson summary{{"observations", dataset.observation_count()},
                {"elections", dataset.groups.size()},
                {"warnings", validated.warnings}};

  if (request.live) {
    std::vector<PageRequest> requests;
    std::set<std::tuple<std::string, std::string, Date>> seen;
    for (const auto& g : dataset.groups) {
      for (const auto& o : g.observations) {
        std::string titles = o.wiki_page_title;
        std::size_t begin = 0;
        while (begin <= titles.size()) {
          auto end = titles.find('|', begin);
          if (end == std::string::npos) end = titles.size();
          const auto title = titles.substr(begin, end - begin);
          begin = end + 1;
          if (title.empty() || !seen.emplace(o.wiki_project, title, o.election_date).second) continue;
          requests.push_back({o.wiki_project, title, add_days(o.election_date, -request.days_before),
                              add_days(o.election_date, request.days_after)});
        }
      }
    }
    const PageviewClient client(pageviews_base_url(), request.policy);
    const auto outcomes = client.fetch_all(requests);

    // Requests for the same page around different elections merge into one series.
    std::vector<PageViewSeries> merged;
    std::map<std::pair<std::string, std::string>, std::size_t> index;
    std::string failures;
    for (const auto& o : outcomes) {
      if (!o.ok()) {
        try {
          std::rethrow_exception(o.error);
        } catch (const std::exception& e) {
          failures += std::string("  ") + e.what() + "\n";
        }
        continue;
      }
      auto [it, inserted] = index.try_emplace({o.series.wiki_project, o.series.page_title}, merged.size());
      if (inserted) merged.push_back(PageViewSeries{o.series.wiki_project, o.series.page_title, {}});
      merged[it->second].daily.insert(o.series.daily.begin(), o.series.daily.end());
    }
    if (!failures.empty()) throw NetworkError("page-view fetch failed:\n" + failures);
    std::ostringstream out;
    write_pageviews_csv(out, merged);
    result.files.push_back({"pageviews.csv", out.str()});
    summary["series_fetched"] = merged.size();
  } else if (!config.pageviews_path.empty()) {
    const auto series = load_pageviews_csv(config.pageviews_path);
    std::vector<std::string> notes;
    compute_window_sums(dataset, series, &notes);
    summary["series_loaded"] = series.size();
    summary["notes"] = notes;
  }

  result.files.push_back({"ingest_summary.json", summary.dump(2) + "\n"});
  result.summary = fmt::format("{} observations in {} elections\n", dataset.observation_count(),
                               dataset.groups.size());
  for (const auto& w : validated.warnings) result.summary += "warning: " + w + "\n";
  return result;
}

}  // namespace wikivote::cli
