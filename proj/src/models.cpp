#include <cmath>
#include <map>

#include <fmt/format.h>

#include "wikivote/error.hpp"
#include "wikivote/forecast.hpp"

namespace wikivote {

namespace {

double response_of(const FeatureRow& row, Dependent dependent) {
  return dependent == Dependent::vote_share ? row.vote_share : row.vote_change;
}

void require_finite(double v, const char* covariate, const FeatureRow& row) {
  if (!std::isfinite(v)) {
    throw DataError(fmt::format("missing covariate '{}' for party '{}'", covariate, row.party_id));
  }
}

Matrix covariate_matrix(std::span<const FeatureRow> rows, const ModelSpec& spec) {
  const auto k = design_column_names(spec).size();
  Matrix x(rows.size(), k);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    require_finite(r.news_share, "news_share", r);
    const double news = r.news_share;
    const double is_new = r.new_party;
    const double incumbent = r.incumbent;
    x(i, 0) = 1.0;
    x(i, 1) = news;
    x(i, 2) = is_new;
    x(i, 3) = incumbent;
    x(i, 4) = news * incumbent;
    if (spec.include_wikipedia) {
      require_finite(r.wiki_share, "wiki_share", r);
      x(i, 5) = r.wiki_share;
      x(i, 6) = is_new * r.wiki_share;
    }
  }
  return x;
}

}  // namespace

const std::vector<ModelSpec>& all_model_specs() {
  static const std::vector<ModelSpec> specs{
      {"1.0", Dependent::vote_share, false, Subset::all},
      {"1.1", Dependent::vote_share, true, Subset::all},
      {"1.2", Dependent::vote_share, false, Subset::small_parties},
      {"1.3", Dependent::vote_share, true, Subset::small_parties},
      {"2.0", Dependent::vote_change, false, Subset::all},
      {"2.1", Dependent::vote_change, true, Subset::all},
      {"2.2", Dependent::vote_change, false, Subset::small_parties},
      {"2.3", Dependent::vote_change, true, Subset::small_parties},
  };
  return specs;
}

const ModelSpec& model_spec(std::string_view id) {
  std::string valid;
  for (const auto& spec : all_model_specs()) {
    if (spec.id == id) return spec;
    valid += (valid.empty() ? "" : ", ") + spec.id;
  }
  throw ArgumentError("unknown model id '" + std::string(id) + "' (valid: " + valid + ")");
}

std::vector<std::string> design_column_names(const ModelSpec& spec) {
  std::vector<std::string> names{kIntercept, kNews, kNewParty, kIncumbency, kNewsXIncumbency};
  if (spec.include_wikipedia) {
    names.emplace_back(kWikipedia);
    names.emplace_back(kNewPartyXWikipedia);
  }
  return names;
}

ModelDesign build_design_matrix(std::span<const FeatureRow> rows, const ModelSpec& spec) {
  std::vector<FeatureRow> used = spec.subset == Subset::small_parties
                                     ? subset_small(rows)
                                     : std::vector<FeatureRow>(rows.begin(), rows.end());
  if (used.empty()) throw DataError("model " + spec.id + ": no rows after subsetting");

  auto names = design_column_names(spec);
  auto x = covariate_matrix(used, spec);
  std::vector<std::string> warnings;
  for (std::size_t c = 1; c < x.cols(); ++c) {
    bool constant = true;
    for (std::size_t r = 1; r < x.rows() && constant; ++r) constant = x(r, c) == x(0, c);
    if (constant) {
      warnings.push_back(fmt::format("model {}: column '{}' is constant ({})", spec.id, names[c],
                                     x(0, c)));
    }
  }
  std::vector<double> y;
  y.reserve(used.size());
  for (const auto& r : used) y.push_back(response_of(r, spec.dependent));
  return ModelDesign{DesignMatrix(std::move(x), std::move(names)), std::move(y), std::move(used),
                     std::move(warnings)};
}

DesignMatrix design_for_prediction(std::span<const FeatureRow> rows, const ModelSpec& spec) {
  return DesignMatrix(covariate_matrix(rows, spec), design_column_names(spec));
}

ModelReport fit_model(std::span<const FeatureRow> rows, const ModelSpec& spec) {
  auto design = build_design_matrix(rows, spec);
  ModelReport report;
  report.spec = spec;
  report.rows_used = design.rows.size();
  report.warnings = std::move(design.warnings);
  try {
    report.fit = ols_fit(design.x, design.y);
  } catch (const SingularMatrixError& e) {
    throw DataError("model " + spec.id + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError("model " + spec.id + ": " + e.what());
  }
  return report;
}

ModelComparison compare_models(const ModelReport& base, const ModelReport& full) {
  if (base.spec.dependent != full.spec.dependent || base.spec.subset != full.spec.subset) {
    throw ArgumentError("cannot compare model " + base.spec.id + " with " + full.spec.id +
                        ": dependent variable or subset differ");
  }
  return {full.fit.r2 - base.fit.r2, full.fit.adj_r2 - base.fit.adj_r2};
}

Predictions predict(const ModelReport& report, std::span<const FeatureRow> new_rows) {
  const auto x = design_for_prediction(new_rows, report.spec);
  const auto beta = report.fit.coefficients();
  if (beta.size() != x.cols()) {
    throw ArgumentError("model " + report.spec.id + " carries " + std::to_string(beta.size()) +
                        " coefficients, design needs " + std::to_string(x.cols()));
  }
  Predictions out;
  out.values = x.values() * std::span<const double>(beta);
  const double lo = report.spec.dependent == Dependent::vote_share ? 0.0 : -100.0;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    const bool outside = out.values[i] < lo || out.values[i] > 100.0;
    out.out_of_range.push_back(outside);
    if (outside) {
      out.warnings.push_back(fmt::format("party '{}': prediction {:.4g} lies outside [{}, 100]",
                                         new_rows[i].party_id, out.values[i], lo));
    }
  }
  return out;
}

std::vector<double> normalize_within_groups(const Predictions& predictions,
                                            std::span<const FeatureRow> rows,
                                            const ModelSpec& spec) {
  if (spec.dependent != Dependent::vote_share) {
    throw ArgumentError("normalisation applies to vote-share models only, not " + spec.id);
  }
  if (predictions.values.size() != rows.size()) {
    throw ArgumentError("normalisation needs one row per prediction");
  }
  std::map<std::pair<std::string, Date>, double> totals;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    totals[{rows[i].country, rows[i].election_date}] += predictions.values[i];
  }
  std::vector<double> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double total = totals.at({rows[i].country, rows[i].election_date});
    if (!(total > 0.0)) {
      throw DataError(fmt::format("cannot normalise group ({}, {}): predictions sum to {:.4g}",
                                  rows[i].country, format_date(rows[i].election_date), total));
    }
    out.push_back(100.0 * predictions.values[i] / total);
  }
  return out;
}

nlohmann::ordered_json to_json(const ModelReport& report) {
  nlohmann::ordered_json terms = nlohmann::ordered_json::array();
  for (const auto& t : report.fit.terms) {
    terms.push_back(nlohmann::ordered_json{{"name", t.name},
                     {"beta", t.beta},
                     {"se", t.se},
                     {"t", t.t_stat},
                     {"p", t.p_value},
                     {"stars", t.stars}});
  }
  return nlohmann::ordered_json{{"spec", report.spec.id},
          {"terms", terms},
          {"r2", report.fit.r2},
          {"adj_r2", report.fit.adj_r2},
          {"n", report.fit.n}};
}

ModelReport model_report_from_json(const nlohmann::ordered_json& j) {
  try {
    ModelReport report;
    report.spec = model_spec(j.at("spec").get<std::string>());
    for (const auto& t : j.at("terms")) {
      report.fit.terms.push_back(TermEstimate{t.at("name").get<std::string>(),
                                              t.at("beta").get<double>(), t.at("se").get<double>(),
                                              t.at("t").get<double>(), t.at("p").get<double>(),
                                              t.at("stars").get<std::string>()});
    }
    report.fit.r2 = j.at("r2").get<double>();
    report.fit.adj_r2 = j.at("adj_r2").get<double>();
    report.fit.n = j.at("n").get<std::size_t>();
    report.rows_used = report.fit.n;
    if (report.fit.terms.size() != design_column_names(report.spec).size()) {
      throw DataError("model report " + report.spec.id + " has the wrong number of terms");
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model report: ") + e.what());
  }
}

}  // namespace wikivote
