// Acceptance suite: one PASS/FAIL/SKIP line per criterion. Exit status is
// nonzero when any criterion fails; skipped criteria do not count as failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "support/oracles.hpp"
#include "wikivote/domain.hpp"
#include "wikivote/error.hpp"
#include "wikivote/features.hpp"
#include "wikivote/forecast.hpp"
#include "wikivote/ingest.hpp"
#include "wikivote/linalg.hpp"
#include "wikivote/stats.hpp"

namespace fs = std::filesystem;
using namespace wikivote;

namespace {

enum class Verdict { pass, fail, skip };

struct Outcome {
  Verdict verdict;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Date day(int y, unsigned m, unsigned d) {
  return Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
}

Matrix to_matrix(const oracle::Rows& rows) {
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

// ---------------------------------------------------------------------------
// 1. OLS oracle equivalence

Outcome ols_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z(0.0, 1.0);
  double worst_beta = 0.0, worst_orth_ratio = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 1 + rng() % 7;
    const std::size_t n = std::max<std::size_t>(2 * k + 1, 8 + rng() % 43);  // <= 50
    const auto x = oracle::random_design(rng, n, k);
    std::vector<double> y;
    for (const auto& row : x) {
      double v = z(rng);
      for (std::size_t j = 0; j < k; ++j) v += (j + 1.0) * row[j];
      y.push_back(v);
    }
    const auto beta = qr_solve(to_matrix(x), y);
    const auto expected = oracle::normal_equations(x, y);
    for (std::size_t j = 0; j < k; ++j) worst_beta = std::max(worst_beta, std::abs(beta[j] - expected[j]));

    double max_y = 0.0;
    for (double v : y) max_y = std::max(max_y, std::abs(v));
    std::vector<std::string> names(k, "x");
    names[0] = "Intercept";
    const auto fit = ols_fit(DesignMatrix(to_matrix(x), names), y);
    for (std::size_t j = 0; j < k; ++j) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += x[i][j] * fit.residuals[i];
      worst_orth_ratio = std::max(worst_orth_ratio, std::abs(dot) / (1e-8 * n * max_y));
    }
  }
  const double secs = seconds_since(t0);
  const bool ok = worst_beta <= 1e-8 && worst_orth_ratio < 1.0 && secs < 1.0;
  return {ok ? Verdict::pass : Verdict::fail,
          fmt::format("200 systems: max|b_qr - b_normal| = {:.2e} (tol 1e-8), max |X^T r| / (1e-8 n max|y|) = "
                      "{:.2e} (< 1), {:.3f} s (< 1 s)",
                      worst_beta, worst_orth_ratio, secs)};
}

// ---------------------------------------------------------------------------
// 2. Distribution correctness

Outcome distributions() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int i = 1; i <= 100; ++i) {
    const double t = i / 10.0;
    worst = std::max(worst, std::abs(student_t_two_sided_p(t, 1) - oracle::t_two_sided_df1(t)));
    worst = std::max(worst, std::abs(student_t_two_sided_p(t, 2) - oracle::t_two_sided_df2(t)));
  }
  double gauss = 0.0;
  for (double t : {1.0, 1.96, 2.5, 3.0}) {
    gauss = std::max(gauss, std::abs(student_t_two_sided_p(t, 1e6) - oracle::gaussian_two_sided(t)));
  }
  const double secs = seconds_since(t0);
  const bool ok = worst <= 1e-10 && gauss <= 1e-4 && secs < 1.0;
  return {ok ? Verdict::pass : Verdict::fail,
          fmt::format("df=1,2 closed forms over t=0.1..10: max err {:.2e} (tol 1e-10); df=1e6 vs Gaussian: "
                      "max err {:.2e} (tol 1e-4); {:.3f} s (< 1 s)",
                      worst, gauss, secs)};
}

// ---------------------------------------------------------------------------
// 3. Table reproduction (needs the party list with page views)

struct Cell {
  const char* term;
  double beta, se;
};
struct PublishedModel {
  const char* id;
  std::vector<Cell> cells;
  double r2, adj_r2;
  std::size_t n;
};

const std::vector<PublishedModel>& published() {
  static const std::vector<PublishedModel> tables{
      {"1.0", {{kIntercept, 3.66, 1.81}, {kNews, 0.66, 0.09}, {kNewParty, -2.00, 1.72}, {kIncumbency, -6.24, 3.85}, {kNewsXIncumbency, 0.35, 0.16}}, 0.75, 0.73, 59},
      {"1.1", {{kIntercept, 1.96, 2.13}, {kNews, 0.65, 0.09}, {kNewParty, -1.15, 2.72}, {kIncumbency, -4.91, 3.94}, {kNewsXIncumbency, 0.31, 0.16}, {kWikipedia, 0.12, 0.08}, {kNewPartyXWikipedia, -0.09, 0.11}}, 0.76, 0.73, 59},
      {"1.2", {{kIntercept, 4.75, 1.09}, {kNews, 0.24, 0.09}, {kNewParty, 0.00, 0.94}, {kIncumbency, -1.55, 2.37}, {kNewsXIncumbency, 0.10, 0.16}}, 0.33, 0.24, 35},
      {"1.3", {{kIntercept, 2.58, 1.59}, {kNews, 0.25, 0.09}, {kNewParty, 1.79, 1.66}, {kIncumbency, 0.18, 2.50}, {kNewsXIncumbency, 0.05, 0.16}, {kWikipedia, 0.16, 0.09}, {kNewPartyXWikipedia, -0.15, 0.09}}, 0.40, 0.27, 35},
      {"2.0", {{kIntercept, -0.70, 2.45}, {kNews, -0.02, 0.12}, {kNewParty, 3.35, 2.33}, {kIncumbency, -3.27, 5.22}, {kNewsXIncumbency, 0.15, 0.22}}, 0.05, -0.02, 59},
      {"2.1", {{kIntercept, -6.45, 2.51}, {kNews, -0.03, 0.10}, {kNewParty, 5.29, 3.19}, {kIncumbency, 1.21, 4.64}, {kNewsXIncumbency, 0.03, 0.19}, {kWikipedia, 0.40, 0.10}, {kNewPartyXWikipedia, -0.25, 0.13}}, 0.32, 0.24, 59},
      {"2.2", {{kIntercept, -2.43, 1.54}, {kNews, 0.06, 0.13}, {kNewParty, 3.91, 1.33}, {kIncumbency, 1.36, 3.34}, {kNewsXIncumbency, -0.13, 0.22}}, 0.25, 0.15, 35},
      {"2.3", {{kIntercept, -5.71, 2.14}, {kNews, 0.13, 0.12}, {kNewParty, 4.10, 2.23}, {kIncumbency, 4.05, 3.36}, {kNewsXIncumbency, -0.26, 0.21}, {kWikipedia, 0.21, 0.12}, {kNewPartyXWikipedia, -0.12, 0.12}}, 0.40, 0.27, 35},
  };
  return tables;
}

Outcome table_reproduction(const fs::path& data_dir) {
  const auto parties = data_dir / "party_list.csv";
  if (!fs::exists(parties)) {
    return {Verdict::skip, "party list with page views (" + parties.string() +
                               ") not present; replaced by criterion 4"};
  }
  try {
    const auto dataset = validate_dataset(load_party_csv(parties)).dataset;
    std::vector<PageViewSeries> series;
    if (fs::exists(data_dir / "party_pageviews.csv")) series = load_pageviews_csv(data_dir / "party_pageviews.csv");
    const auto rows = build_feature_rows(dataset, compute_window_sums(dataset, series));

    std::vector<std::string> misses;
    std::map<std::string, ModelReport> fitted;
    for (const auto& pub : published()) {
      const auto report = fit_model(rows, model_spec(pub.id));
      fitted[pub.id] = report;
      for (std::size_t j = 0; j < pub.cells.size(); ++j) {
        const auto& t = report.fit.terms[j];
        if (std::abs(t.beta - pub.cells[j].beta) > 0.005 || std::abs(t.se - pub.cells[j].se) > 0.005) {
          misses.push_back(fmt::format("{} {}: {:.3f} ({:.3f}) vs {:.2f} ({:.2f})", pub.id, t.name, t.beta,
                                       t.se, pub.cells[j].beta, pub.cells[j].se));
        }
      }
      if (std::abs(report.fit.r2 - pub.r2) > 0.005 || std::abs(report.fit.adj_r2 - pub.adj_r2) > 0.005) {
        misses.push_back(fmt::format("{} R2 {:.3f}/{:.3f} vs {:.2f}/{:.2f}", pub.id, report.fit.r2,
                                     report.fit.adj_r2, pub.r2, pub.adj_r2));
      }
      if (report.fit.n != pub.n) misses.push_back(fmt::format("{} N {} vs {}", pub.id, report.fit.n, pub.n));
    }
    const auto delta = compare_models(fitted["1.0"], fitted["1.1"]);
    if (std::abs(delta.delta_r2 - 0.01) > 0.005) misses.push_back(fmt::format("dR2(1.0->1.1) {:.4f}", delta.delta_r2));
    if (std::abs(delta.delta_adj_r2 - 0.002) > 0.005) {
      misses.push_back(fmt::format("dAdjR2(1.0->1.1) {:.4f}", delta.delta_adj_r2));
    }
    std::string detail = fmt::format("8 models, {} mismatches", misses.size());
    for (std::size_t i = 0; i < std::min<std::size_t>(misses.size(), 6); ++i) detail += "; " + misses[i];
    return {misses.empty() ? Verdict::pass : Verdict::fail, detail};
  } catch (const Error& e) {
    return {Verdict::fail, std::string("could not fit the bundled data: ") + e.what()};
  }
}

// ---------------------------------------------------------------------------
// 4. Synthetic coefficient recovery

Outcome coefficient_recovery() {
  const auto t0 = Clock::now();
  const std::vector<double> beta{1.96, 0.65, -1.15, -4.91, 0.31, 0.12, -0.09};  // model 1.1
  const std::size_t n = 59, k = beta.size();
  constexpr double kT975Df52 = 2.0066468;  // Student-t 97.5% quantile, 52 df (tables)

  // One fixed design shaped like the election data: nine elections of six
  // parties and one of five, shares from lognormal weights.
  std::mt19937_64 rng(59);
  std::lognormal_distribution<double> weight(0.0, 1.0);
  oracle::Rows x;
  for (int g = 0; g < 10; ++g) {
    const int parties = g == 9 ? 5 : 6;
    std::vector<double> news(parties), wiki(parties);
    for (int i = 0; i < parties; ++i) {
      news[i] = weight(rng);
      wiki[i] = news[i] * weight(rng);
    }
    const double sn = std::accumulate(news.begin(), news.end(), 0.0);
    const double sw = std::accumulate(wiki.begin(), wiki.end(), 0.0);
    for (int i = 0; i < parties; ++i) {
      const double ns = 100 * news[i] / sn, ws = 100 * wiki[i] / sw;
      const double is_new = i >= parties - 2 && g % 2 == 0 ? 1 : (i == parties - 1 ? 1 : 0);
      const double inc = i == 0 || (i == 2 && g % 3 == 0) ? 1 : 0;
      x.push_back({1.0, ns, is_new, inc, ns * inc, ws, is_new * ws});
    }
  }
  std::vector<double> signal(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) signal[i] += x[i][j] * beta[j];
  }
  const double mean = std::accumulate(signal.begin(), signal.end(), 0.0) / n;
  double var = 0.0;
  for (double s : signal) var += (s - mean) * (s - mean);
  var /= double(n - 1);
  // adj R^2 estimates 1 - sigma^2 / (var_signal + sigma^2).
  const double sigma = std::sqrt(var * (1 - 0.73) / 0.73);

  std::vector<std::string> names{kIntercept, kNews, kNewParty, kIncumbency, kNewsXIncumbency, kWikipedia,
                                 kNewPartyXWikipedia};
  const DesignMatrix design(to_matrix(x), names);
  std::normal_distribution<double> noise(0.0, sigma);
  std::vector<int> covered(k, 0);
  double adj_sum = 0.0;
  const int runs = 1000;
  for (int run = 0; run < runs; ++run) {
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = signal[i] + noise(rng);
    const auto fit = ols_fit(design, y);
    adj_sum += fit.adj_r2;
    for (std::size_t j = 0; j < k; ++j) {
      const auto& t = fit.terms[j];
      if (std::abs(t.beta - beta[j]) <= kT975Df52 * t.se) ++covered[j];
    }
  }
  const double mean_adj = adj_sum / runs;
  bool ok = std::abs(mean_adj - 0.73) <= 0.02 && seconds_since(t0) < 30.0;
  std::string rates;
  for (std::size_t j = 0; j < k; ++j) {
    const double rate = 100.0 * covered[j] / runs;
    ok = ok && rate >= 93.0 && rate <= 97.0;
    rates += fmt::format("{}{:.1f}", j ? " " : "", rate);
  }
  return {ok ? Verdict::pass : Verdict::fail,
          fmt::format("1000 runs, n=59: 95% CI coverage per coefficient [{}]% (need 93-97); mean adj R2 "
                      "{:.3f} (target 0.73 +/- 0.02); {:.2f} s",
                      rates, mean_adj, seconds_since(t0))};
}

// ---------------------------------------------------------------------------
// 5. Turnout correlation

Outcome turnout(const fs::path& data_dir) {
  const double internal = correlation_adj_r2(0.72, 12);
  const bool internal_ok = std::abs(internal - 0.470) <= 0.001;
  std::string detail = fmt::format("adj R2 from r=0.72, n=12: {:.5f} (0.470 +/- 0.001)", internal);

  const auto records_path = data_dir / "turnout_records.csv";
  if (!fs::exists(records_path)) {
    detail += "; per-edition records (" + records_path.string() + ") not present, data check skipped";
    return {internal_ok ? Verdict::pass : Verdict::fail, detail};
  }
  try {
    const auto analysis = turnout_analysis(load_turnout_csv(records_path));
    const auto& c = analysis.correlation;
    const bool ok = std::abs(c.r - 0.72) <= 0.01 && std::abs(c.adj_r2 - 0.47) <= 0.01 && c.n == 12 &&
                    analysis.excluded == 2;
    detail += fmt::format("; records: r = {:.3f}, adj R2 = {:.3f}, n = {}, excluded {}", c.r, c.adj_r2, c.n,
                          analysis.excluded);
    return {internal_ok && ok ? Verdict::pass : Verdict::fail, detail};
  } catch (const Error& e) {
    return {Verdict::fail, detail + "; records: " + e.what()};
  }
}

// ---------------------------------------------------------------------------
// 6. Attention-rate recovery

PageViewSeries planted(double amplitude, double up, double down, double noise_sd, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, noise_sd > 0 ? noise_sd : 1.0);
  const auto peak = day(2014, 5, 25);
  PageViewSeries s{"en.wikipedia", "Synthetic", {}};
  for (int d = -30; d <= 30; ++d) {
    double v = oracle::double_exponential(amplitude, up, down, d);
    if (noise_sd > 0 && d != 0) v *= std::exp(z(rng));
    s.daily[add_days(peak, d)] = static_cast<std::int64_t>(std::llround(v));
  }
  return s;
}

Outcome attention() {
  const double up = 0.2, down = 0.5;  // fast decay, as after polling day
  const auto peak = day(2014, 5, 25);
  auto rel = [](double got, double want) { return std::abs(got / want - 1.0); };
  try {
    // Counts are integers, so "noise-free" needs an amplitude large enough
    // that rounding stays far below 1% at the tails of the window.
    const auto clean = attention_dynamics(planted(1e12, up, down, 0.0, 0), peak);
    const double clean_err = std::max(rel(clean.lambda_up, up), rel(clean.lambda_down, down));

    double noisy_err = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto d = attention_dynamics(planted(1e6, up, down, 0.05, seed), peak);
      noisy_err = std::max({noisy_err, rel(d.lambda_up, up), rel(d.lambda_down, down)});
    }
    const bool asym = clean.lambda_down > clean.lambda_up;
    // Reported only: at amplitude 1000 rounding to whole views biases the
    // steep side by a few percent.
    const auto small = attention_dynamics(planted(1000, up, down, 0.0, 0), peak);
    const bool ok = clean_err < 0.01 && noisy_err < 0.10 && asym;
    return {ok ? Verdict::pass : Verdict::fail,
            fmt::format("planted (0.2, 0.5): noise-free ({:.4f}, {:.4f}) max rel err {:.2e} (< 1%); 5% lognormal "
                        "noise, 10 seeds: max rel err {:.3f} (< 10%); lambda_down > lambda_up: {}; "
                        "[info] amplitude 1000 with integer counts gives ({:.4f}, {:.4f})",
                        clean.lambda_up, clean.lambda_down, clean_err, noisy_err, asym ? "yes" : "no",
                        small.lambda_up, small.lambda_down)};
  } catch (const Error& e) {
    return {Verdict::fail, e.what()};
  }
}

// ---------------------------------------------------------------------------
// 7. Feature invariants

Outcome feature_invariants() {
  std::mt19937_64 rng(7);
  std::lognormal_distribution<double> count(5.0, 2.0);
  std::uniform_real_distribution<double> share(0.0, 40.0);
  int groups = 0;
  double worst_sum = 0.0, worst_scale = 0.0;
  bool new_party_ok = true;
  for (int trial = 0; trial < 300; ++trial) {
    const int k = 2 + static_cast<int>(rng() % 10);
    std::vector<PartyObservation> rows;
    for (int i = 0; i < k; ++i) {
      PartyObservation p;
      p.country = "C";
      p.election_date = day(2014, 5, 25);
      p.party_id = "P" + std::to_string(i);
      p.is_new = i == k - 1;
      p.vote_share = std::round(share(rng) * 10) / 10;
      if (!p.is_new) p.prev_vote_share = std::round(share(rng) * 10) / 10;
      p.news_mentions = 1 + static_cast<std::int64_t>(count(rng));
      p.wiki_views = std::floor(count(rng)) + (i == 0 ? 1 : 0);
      p.wiki_project = "xx.wikipedia";
      p.wiki_page_title = p.party_id;
      rows.push_back(p);
    }
    const auto dataset = validate_dataset(rows).dataset;
    const auto sums = compute_window_sums(dataset, {});
    const auto features = build_feature_rows(dataset, sums);
    double wiki = 0, news = 0;
    for (const auto& f : features) {
      wiki += f.wiki_share;
      news += f.news_share;
      if (f.new_party == 1 && f.vote_change != f.vote_share) new_party_ok = false;
    }
    worst_sum = std::max({worst_sum, std::abs(wiki - 100), std::abs(news - 100)});

    const auto& group = dataset.groups.front();
    std::map<std::string, double> base;
    for (const auto& o : group.observations) base[o.party_id] = *o.wiki_views;
    const auto reference = traffic_shares(group, base);
    for (double c : {0.5, 3.0, 1000.0}) {
      auto scaled = base;
      for (auto& [id, v] : scaled) v *= c;
      for (const auto& [id, v] : traffic_shares(group, scaled)) {
        worst_scale = std::max(worst_scale, std::abs(v - reference.at(id)));
      }
    }
    ++groups;
  }

  std::vector<FeatureRow> boundary(3);
  boundary[0].vote_share = 15.0;
  boundary[1].vote_share = std::nextafter(15.0, 0.0);
  boundary[2].vote_share = std::nextafter(15.0, 100.0);
  const auto small = subset_small(boundary);
  const bool strict = small.size() == 1 && small[0].vote_share < 15.0;

  const bool ok = worst_sum <= 1e-9 && worst_scale <= 1e-12 && strict && new_party_ok;
  return {ok ? Verdict::pass : Verdict::fail,
          fmt::format("{} random groups: max |sum - 100| = {:.1e} (tol 1e-9); scale c in {{0.5,3,1000}} max "
                      "share drift {:.1e} (tol 1e-12); 15.0 excluded from small subset: {}; new-party "
                      "vote_change = vote_share: {}",
                      groups, worst_sum, worst_scale, strict ? "yes" : "no", new_party_ok ? "yes" : "no")};
}

// ---------------------------------------------------------------------------
// 8. CLI determinism

std::map<std::string, std::string> report_files(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (name == "manifest.json") continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    files[name] = ss.str();
  }
  return files;
}

Outcome cli_determinism(const fs::path& data_dir) {
  const auto root = fs::temp_directory_path() / ("wikivote_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  std::vector<std::map<std::string, std::string>> runs;
  for (const char* sub : {"a", "b"}) {
    const auto out = root / sub;
    const auto cmd = fmt::format("\"{}\" fit --models 1.0 --format json --dataset \"{}\" --pageviews \"{}\" "
                                 "-o \"{}\" >/dev/null 2>&1",
                                 WIKIVOTE_BIN, (data_dir / "sample_parties.csv").string(),
                                 (data_dir / "sample_pageviews.csv").string(), out.string());
    const int status = std::system(cmd.c_str());
    if (status != 0) {
      fs::remove_all(root);
      return {Verdict::fail, fmt::format("`wikivote fit` exited with status {}", status)};
    }
    runs.push_back(report_files(out));
  }
  fs::remove_all(root);
  const bool same = runs[0] == runs[1] && !runs[0].empty();
  std::string names;
  for (const auto& [name, contents] : runs[0]) names += (names.empty() ? "" : ", ") + name;
  return {same ? Verdict::pass : Verdict::fail,
          fmt::format("two runs of `fit --models 1.0 --format json`: {} ({})",
                      same ? "byte-identical" : "outputs differ", names)};
}

}  // namespace

int main() {
  const fs::path data_dir = WIKIVOTE_DATA_DIR;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 OLS oracle equivalence", ols_oracle},
      {"2 Distribution correctness", distributions},
      {"3 Table reproduction", [&] { return table_reproduction(data_dir); }},
      {"4 Synthetic coefficient recovery", coefficient_recovery},
      {"5 Turnout correlation", [&] { return turnout(data_dir); }},
      {"6 Attention-rate recovery", attention},
      {"7 Feature invariants", feature_invariants},
      {"8 CLI determinism", [&] { return cli_determinism(data_dir); }},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {Verdict::fail, std::string("threw: ") + e.what()};
    }
    const char* tag = outcome.verdict == Verdict::pass ? "PASS" : outcome.verdict == Verdict::fail ? "FAIL" : "SKIP";
    failures += outcome.verdict == Verdict::fail;
    std::cout << "[" << tag << "] " << name << " -- " << outcome.detail << std::endl;
  }
  std::cout << (failures ? fmt::format("{} criterion(s) failed", failures) : std::string("all criteria met or skipped"))
            << std::endl;
  return failures ? 1 : 0;
}
