#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "wikivote/date.hpp"
#include "wikivote/features.hpp"
#include "wikivote/ingest.hpp"
#include "wikivote/stats.hpp"

namespace wikivote {

// ---------------------------------------------------------------------------
// Party-level vote models
// ---------------------------------------------------------------------------

enum class Dependent { vote_share, vote_change };
enum class Subset { all, small_parties };

// One of the eight model specifications. 1.x regress vote share, 2.x vote
// change; x.1 and x.3 add the Wikipedia terms; x.2 and x.3 keep only parties
// below 15% of the vote.
struct ModelSpec {
  std::string id;
  Dependent dependent = Dependent::vote_share;
  bool include_wikipedia = false;
  Subset subset = Subset::all;

  bool operator==(const ModelSpec&) const = default;
};

const std::vector<ModelSpec>& all_model_specs();
// Throws ArgumentError listing the valid ids.
const ModelSpec& model_spec(std::string_view id);

// Column names in design order.
inline constexpr const char* kIntercept = "Intercept";
inline constexpr const char* kNews = "News";
inline constexpr const char* kNewParty = "New Party";
inline constexpr const char* kIncumbency = "Incumbency";
inline constexpr const char* kNewsXIncumbency = "News x Incumbency";
inline constexpr const char* kWikipedia = "Wikipedia";
inline constexpr const char* kNewPartyXWikipedia = "New Party x Wikipedia";

std::vector<std::string> design_column_names(const ModelSpec& spec);

struct ModelDesign {
  DesignMatrix x;
  std::vector<double> y;
  std::vector<FeatureRow> rows;  // rows after subsetting, in design order
  std::vector<std::string> warnings;
};

// Applies the model's subset, then lays out Intercept, News, New Party,
// Incumbency, News x Incumbency[, Wikipedia, New Party x Wikipedia]. Throws
// DataError on an empty subset; constant non-intercept columns only warn.
ModelDesign build_design_matrix(std::span<const FeatureRow> rows, const ModelSpec& spec);

// Covariate columns for `rows` without subsetting or a response. A NaN
// covariate the model needs raises DataError naming it.
DesignMatrix design_for_prediction(std::span<const FeatureRow> rows, const ModelSpec& spec);

struct ModelReport {
  ModelSpec spec;
  FitResult fit;
  std::size_t rows_used = 0;
  std::vector<std::string> warnings;
};

ModelReport fit_model(std::span<const FeatureRow> rows, const ModelSpec& spec);

struct ModelComparison {
  double delta_r2 = 0.0;
  double delta_adj_r2 = 0.0;
};

// full - base. Throws ArgumentError unless both share dependent and subset.
ModelComparison compare_models(const ModelReport& base, const ModelReport& full);

struct Predictions {
  std::vector<double> values;
  std::vector<bool> out_of_range;  // outside [0,100] (vote share) or [-100,100] (change)
  std::vector<std::string> warnings;
};

// X_new * beta, unclamped.
Predictions predict(const ModelReport& report, std::span<const FeatureRow> new_rows);

// Presentation only: rescales vote-share predictions so each
// (country, election_date) group sums to 100. Throws ArgumentError for
// vote-change models and DataError when a group's sum is not positive.
std::vector<double> normalize_within_groups(const Predictions& predictions,
                                            std::span<const FeatureRow> rows,
                                            const ModelSpec& spec);

// {spec, terms:[{name,beta,se,t,p,stars}], r2, adj_r2, n}
nlohmann::ordered_json to_json(const ModelReport& report);
ModelReport model_report_from_json(const nlohmann::ordered_json& j);

// ---------------------------------------------------------------------------
// Turnout change vs. page-view change
// ---------------------------------------------------------------------------

struct TurnoutRecord {
  std::string language_edition;
  double views_prev = 0.0;
  double views_curr = 0.0;
  double turnout_prev = 0.0;  // percent
  double turnout_curr = 0.0;
  bool outlier = false;
};

struct TurnoutRatio {
  std::string language_edition;
  double views_change = 0.0;    // relative_change(views_prev, views_curr)
  double turnout_change = 0.0;  // relative_change(turnout_prev, turnout_curr)
  bool outlier = false;
  // Residual of turnout_change against the line fitted on non-outliers,
  // internally studentised for included records and scaled by the
  // prediction standard error for outliers. Diagnostic only.
  double studentized_residual = 0.0;
};

struct TurnoutAnalysis {
  std::vector<TurnoutRatio> records;  // input order, outliers included
  CorrelationResult correlation;      // non-outliers only
  std::size_t excluded = 0;
};

// Throws DataError when fewer than 3 non-outlier records remain or a record
// breaks its invariants (views_prev > 0, turnout in (0,100]).
TurnoutAnalysis turnout_analysis(std::span<const TurnoutRecord> records, Sides sides = Sides::two);

std::vector<TurnoutRecord> read_turnout_csv(std::istream& in, const std::string& source);
std::vector<TurnoutRecord> load_turnout_csv(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Attention build-up and decay around polling day
// ---------------------------------------------------------------------------

struct AttentionDynamics {
  Date peak_date;
  std::int64_t peak_views = 0;
  double lambda_up = 0.0;    // per day, growth rate before the peak
  double lambda_down = 0.0;  // per day, decay rate after the peak
  double fit_quality_up = 0.0;
  double fit_quality_down = 0.0;
  int days_up = 0;
  int days_down = 0;
};

inline constexpr int kDefaultAttentionWindowDays = 30;
inline constexpr int kMinAttentionSideDays = 5;

// Peak = earliest argmax of daily views within election_date +/- window_days.
// lambda_up is the least-squares slope of ln(views) over
// [peak - window_days, peak - 1], lambda_down minus the slope over
// [peak + 1, peak + window_days]; zero-count days are dropped. Throws
// DataError("peak not interior") when the peak is the first or last observed
// day of the window, and DataError when a side has fewer than 5 usable days
// or shows no build-up/decay.
AttentionDynamics attention_dynamics(const PageViewSeries& series, Date election_date,
                                     int window_days = kDefaultAttentionWindowDays);

}  // namespace wikivote
