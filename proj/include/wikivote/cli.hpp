#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "wikivote/forecast.hpp"
#include "wikivote/stats.hpp"

namespace wikivote::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUnexpected = 1,
  kExitUsage = 2,
  kExitData = 3,
  kExitNetwork = 4,
};

enum class Format { json, csv, text };

struct RunConfig {
  std::filesystem::path dataset_path;
  std::filesystem::path pageviews_path;  // empty: use dataset wiki_views
  std::vector<std::string> model_ids;    // empty: all eight
  std::filesystem::path output_dir = "out";
  Format format = Format::text;
  Sides significance_sides = Sides::two;
  int window_days = kDefaultAttentionWindowDays;
  bool strict_inclusion = false;  // "> 5%" instead of ">= 5%"
};

// A report file produced by a command. Files are committed to the output
// directory together (temp file + rename) only after the command succeeds.
struct OutputFile {
  std::string name;
  std::string contents;
};

struct CommandResult {
  std::vector<OutputFile> files;
  std::string summary;  // printed to standard output
  int exit_code = kExitOk;
};

// Entry point used by the `wikivote` binary; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Command bodies. They throw wikivote errors; run() maps them to exit codes.
CommandResult cmd_fit(const RunConfig& config);
CommandResult cmd_features(const RunConfig& config);
CommandResult cmd_predict(const RunConfig& config, const std::string& model_id,
                          const std::filesystem::path& scenario_csv,
                          const std::filesystem::path& report_json = {},
                          bool normalize = false);
CommandResult cmd_turnout(const RunConfig& config, const std::filesystem::path& turnout_csv);

struct AttentionRequest {
  std::optional<Date> election_date;             // applies to every series
  std::filesystem::path election_dates_csv;      // wiki_project,election_date
};
CommandResult cmd_attention(const RunConfig& config, const AttentionRequest& request);
CommandResult cmd_report(const RunConfig& config);

struct IngestRequest {
  bool live = false;
  std::string project;  // single-page mode when non-empty
  std::string title;
  std::optional<Date> start;
  std::optional<Date> end;
  int days_before = kDefaultAttentionWindowDays;
  int days_after = kDefaultAttentionWindowDays;
  FetchPolicy policy;
};
CommandResult cmd_ingest(const RunConfig& config, const IngestRequest& request);

// Side-by-side model table: β with stars and (SE) per model, then R²,
// adjusted R² and N. Two decimals.
std::string render_text_table(std::span<const ModelReport> reports);
std::string render_csv_table(std::span<const ModelReport> reports);

// "0.66*** (0.09)"
std::string format_cell(const TermEstimate& term);

}  // namespace wikivote::cli
