#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "wikivote/csv.hpp"
#include "wikivote/error.hpp"
#include "wikivote/forecast.hpp"

namespace wikivote {

namespace {

void check_record(const TurnoutRecord& r) {
  if (!(r.views_prev > 0.0) || !(r.views_curr >= 0.0) || !std::isfinite(r.views_prev) ||
      !std::isfinite(r.views_curr)) {
    throw DataError("turnout record '" + r.language_edition +
                    "': views_prev must be > 0 and views_curr >= 0");
  }
  for (double t : {r.turnout_prev, r.turnout_curr}) {
    if (!(t > 0.0 && t <= 100.0)) {
      throw DataError("turnout record '" + r.language_edition + "': turnout outside (0,100]");
    }
  }
}

}  // namespace

TurnoutAnalysis turnout_analysis(std::span<const TurnoutRecord> records, Sides sides) {
  TurnoutAnalysis out;
  std::vector<double> xs, ys;
  for (const auto& r : records) {
    check_record(r);
    TurnoutRatio ratio{r.language_edition, relative_change(r.views_prev, r.views_curr),
                       relative_change(r.turnout_prev, r.turnout_curr), r.outlier, 0.0};
    if (r.outlier) {
      ++out.excluded;
    } else {
      xs.push_back(ratio.views_change);
      ys.push_back(ratio.turnout_change);
    }
    out.records.push_back(std::move(ratio));
  }
  if (xs.size() < 3) {
    throw DataError(fmt::format("turnout analysis needs >= 3 non-outlier records, found {}",
                                xs.size()));
  }
  out.correlation = pearson(xs, ys, sides);

  // Diagnostic line on the included records.
  const std::size_t n = xs.size();
  double mx = 0.0;
  for (double x : xs) mx += x;
  mx /= static_cast<double>(n);
  Matrix design(n, 2, 1.0);
  double sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    design(i, 1) = xs[i];
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const auto fit = ols_fit(DesignMatrix(std::move(design), {kIntercept, "views_change"}), ys);
  const double s = std::sqrt(fit.sigma2);
  const double a = fit.terms[0].beta;
  const double b = fit.terms[1].beta;
  for (auto& r : out.records) {
    const double h = 1.0 / static_cast<double>(n) + (r.views_change - mx) * (r.views_change - mx) / sxx;
    const double e = r.turnout_change - (a + b * r.views_change);
    const double scale = s * std::sqrt(r.outlier ? 1.0 + h : std::max(1.0 - h, 0.0));
    r.studentized_residual = scale > 0.0 ? e / scale : 0.0;
  }
  return out;
}

std::vector<TurnoutRecord> read_turnout_csv(std::istream& in, const std::string& source) {
  csv::Reader reader(in, source);
  const std::vector<std::string> required{"language_edition", "views_prev",    "views_curr",
                                          "turnout_prev",     "turnout_curr", "outlier"};
  if (const auto missing = reader.missing_columns(required); !missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw DataError(source + ": missing column(s): " + list);
  }
  std::vector<TurnoutRecord> records;
  while (reader.next()) {
    TurnoutRecord r{reader.field("language_edition"), reader.number("views_prev"),
                    reader.number("views_curr"),      reader.number("turnout_prev"),
                    reader.number("turnout_curr"),    reader.flag("outlier")};
    try {
      check_record(r);
    } catch (const DataError& e) {
      reader.fail(e.what());
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<TurnoutRecord> load_turnout_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "' for reading");
  return read_turnout_csv(in, path.string());
}

}  // namespace wikivote
