#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <system_error>

#include <CLI11.hpp>
#include <fmt/chrono.h>
#include <fmt/format.h>
#include <json.hpp>

#include "wikivote/cli.hpp"
#include "wikivote/error.hpp"

namespace wikivote::cli {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

void write_atomically(const fs::path& target, const std::string& contents) {
  auto tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw DataError("short write to '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw DataError("cannot rename into '" + target.string() + "'");
  }
}

void prepare_output_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw DataError("output directory '" + dir.string() + "' is not writable");
  }
}

// Files are staged as temporaries first; a failure part-way removes the
// staged ones so a failed run never leaves half a report behind.
void commit(const fs::path& dir, const std::vector<OutputFile>& files) {
  std::vector<fs::path> staged;
  try {
    for (const auto& f : files) {
      auto tmp = dir / (f.name + ".staged");
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw DataError("cannot write '" + tmp.string() + "'");
      staged.push_back(tmp);
      out << f.contents;
      out.flush();
      if (!out) throw DataError("short write to '" + tmp.string() + "'");
    }
  } catch (...) {
    std::error_code ignored;
    for (const auto& p : staged) fs::remove(p, ignored);
    throw;
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    std::error_code ec;
    fs::rename(staged[i], dir / files[i].name, ec);
    if (ec) throw DataError("cannot rename into '" + (dir / files[i].name).string() + "'");
  }
}

std::string utc_timestamp() {
  const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", now);
}

void write_manifest(const fs::path& dir, const std::string& command,
                    const std::vector<std::string>& args, int exit_code,
                    const std::vector<OutputFile>& files, const std::string& error) {
  ojson names = ojson::array();
  for (const auto& f : files) names.push_back(f.name);
  ojson manifest{{"command", command},
                 {"args", args},
                 {"status", exit_code == kExitOk ? "ok" : "failed"},
                 {"exit_code", exit_code},
                 {"finished_at", utc_timestamp()},
                 {"files", names},
                 {"feature_window", "7 days before polling day, polling day excluded"}};
  if (!error.empty()) manifest["error"] = error;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return;
  try {
    write_atomically(dir / "manifest.json", manifest.dump(2) + "\n");
  } catch (const Error&) {
    // The manifest is best effort; the exit code already tells the story.
  }
}

Date date_option(const std::string& text, const char* option) {
  try {
    return parse_date(text);
  } catch (const DataError&) {
    throw ArgumentError(std::string(option) + ": expected YYYY-MM-DD, got '" + text + "'");
  }
}

std::vector<std::string> split_ids(const std::vector<std::string>& raw) {
  std::vector<std::string> ids;
  for (const auto& item : raw) {
    std::stringstream ss(item);
    std::string id;
    while (std::getline(ss, id, ',')) {
      if (id.empty()) continue;
      model_spec(id);  // validates, throws ArgumentError listing the valid ids
      ids.push_back(id);
    }
  }
  return ids;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Election forecasting from Wikipedia page views and news coverage", "wikivote"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "wikivote 0.1.0");

  RunConfig config;
  std::string output_dir = config.output_dir.string();
  std::string dataset, pageviews, format = "text", sides = "two";
  std::vector<std::string> raw_models;

  const std::map<std::string, Format> formats{
      {"json", Format::json}, {"csv", Format::csv}, {"text", Format::text}};

  auto common = [&](CLI::App* sub, bool needs_dataset) {
    auto* d = sub->add_option("--dataset", dataset, "Party CSV");
    if (needs_dataset) d->required();
    sub->add_option("--pageviews", pageviews, "Page-view CSV (wiki_project,page_title,date,views)");
    sub->add_option("-o,--output-dir", output_dir, "Directory for report files")->capture_default_str();
    sub->add_option("--format", format, "json, csv or text")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->capture_default_str();
    sub->add_option("--sides", sides, "Significance test sides: two or one")
        ->check(CLI::IsMember({"two", "one"}))
        ->capture_default_str();
    sub->add_flag("--strict-inclusion", config.strict_inclusion,
                  "Warn unless a party polled strictly above 5%");
  };

  auto* fit = app.add_subcommand("fit", "Fit the vote models and emit the side-by-side table");
  common(fit, true);
  fit->add_option("--models", raw_models, "Comma-separated model ids (default: all eight)")
      ->delimiter(',');

  auto* features = app.add_subcommand("features", "Write the feature table as CSV");
  common(features, true);

  auto* predict = app.add_subcommand("predict", "Predict outcomes for a scenario CSV");
  common(predict, true);
  std::string predict_model, scenario, report_json;
  predict->add_option("--model", predict_model, "Model id")->required();
  predict->add_option("--scenario", scenario, "Scenario CSV")->required();
  bool normalize = false;
  predict->add_flag("--normalize", normalize,
                    "Add a column rescaled to sum to 100 per (country, election_date)");
  predict->add_option("--report", report_json, "Saved model_<id>.json to use instead of refitting");

  auto* turnout = app.add_subcommand("turnout", "Correlate page-view change with turnout change");
  common(turnout, false);
  std::string turnout_csv;
  turnout->add_option("--turnout", turnout_csv, "Turnout CSV")->required();

  auto* attention = app.add_subcommand("attention", "Build-up and decay of attention around polling day");
  common(attention, false);
  std::string election_date, election_dates;
  attention->add_option("--election-date", election_date, "Polling day for every series");
  attention->add_option("--election-dates", election_dates,
                        "CSV wiki_project[,page_title],election_date");
  attention->add_option("--window-days", config.window_days, "Days either side of polling day")
      ->check(CLI::Range(1, 365))
      ->capture_default_str();

  auto* report = app.add_subcommand("report", "Traffic shares and correlations");
  common(report, true);

  auto* ingest = app.add_subcommand("ingest", "Validate the party CSV or fetch page views");
  common(ingest, false);
  IngestRequest ingest_request;
  std::string start, end;
  ingest->add_flag("--live", ingest_request.live, "Fetch page views for every party page");
  ingest->add_option("--project", ingest_request.project, "Single page: wiki project, e.g. en.wikipedia");
  ingest->add_option("--title", ingest_request.title, "Single page: article title");
  ingest->add_option("--start", start, "Single page: first day (YYYY-MM-DD)");
  ingest->add_option("--end", end, "Single page: last day (YYYY-MM-DD)");
  ingest->add_option("--days-before", ingest_request.days_before)->capture_default_str();
  ingest->add_option("--days-after", ingest_request.days_after)->capture_default_str();
  ingest->add_option("--max-in-flight", ingest_request.policy.max_in_flight)->capture_default_str();
  ingest->add_option("--retries", ingest_request.policy.retry_limit)->capture_default_str();
  int backoff_ms = static_cast<int>(ingest_request.policy.backoff_base.count());
  ingest->add_option("--backoff-ms", backoff_ms)->capture_default_str();
  ingest->add_option("--user-agent", ingest_request.policy.user_agent);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    // Help and version requests carry exit code 0.
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  config.dataset_path = dataset;
  config.pageviews_path = pageviews;
  config.output_dir = output_dir;
  config.format = formats.at(format);
  config.significance_sides = sides == "one" ? Sides::one : Sides::two;

  CommandResult result;
  std::string error;
  int code = kExitOk;
  bool dir_ready = false;
  try {
    prepare_output_dir(config.output_dir);
    dir_ready = true;
    const std::map<CLI::App*, std::function<CommandResult()>> commands{
        {fit, [&] {
           config.model_ids = split_ids(raw_models);
           return cmd_fit(config);
         }},
        {features, [&] { return cmd_features(config); }},
        {predict, [&] { return cmd_predict(config, predict_model, scenario, report_json, normalize); }},
        {turnout, [&] { return cmd_turnout(config, turnout_csv); }},
        {attention,
         [&] {
           AttentionRequest request;
           if (!election_date.empty()) request.election_date = date_option(election_date, "--election-date");
           request.election_dates_csv = election_dates;
           return cmd_attention(config, request);
         }},
        {report, [&] { return cmd_report(config); }},
        {ingest,
         [&] {
           if (!start.empty()) ingest_request.start = date_option(start, "--start");
           if (!end.empty()) ingest_request.end = date_option(end, "--end");
           ingest_request.policy.backoff_base = std::chrono::milliseconds(backoff_ms);
           return cmd_ingest(config, ingest_request);
         }},
    };
    result = commands.at(chosen)();
    commit(config.output_dir, result.files);
    code = result.exit_code;
    out << result.summary;
  } catch (const ArgumentError& e) {
    error = e.what();
    code = kExitUsage;
  } catch (const NetworkError& e) {
    error = e.what();
    code = kExitNetwork;
  } catch (const DataError& e) {
    error = e.what();
    code = kExitData;
  } catch (const std::exception& e) {
    error = std::string("unexpected: ") + e.what();
    code = kExitUnexpected;
  }
  if (code != kExitOk) {
    err << "error: " << error << "\n";
    result.files.clear();
  }
  if (dir_ready) write_manifest(config.output_dir, chosen->get_name(), args, code, result.files, error);
  return code;
}

}  // namespace wikivote::cli
