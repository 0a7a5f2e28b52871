#include <cmath>
#include <limits>

#include "wikivote/error.hpp"
#include "wikivote/stats.hpp"

namespace wikivote {

DesignMatrix::DesignMatrix(Matrix values, std::vector<std::string> column_names)
    : values_(std::move(values)), names_(std::move(column_names)) {
  if (names_.size() != values_.cols()) {
    throw ArgumentError("design matrix has " + std::to_string(values_.cols()) + " columns but " +
                        std::to_string(names_.size()) + " names");
  }
  if (values_.cols() == 0) throw ArgumentError("design matrix has no columns");
  for (std::size_t r = 0; r < values_.rows(); ++r) {
    if (values_(r, 0) != 1.0) throw DataError("design matrix column 0 must be the intercept");
    for (std::size_t c = 0; c < values_.cols(); ++c) {
      if (!std::isfinite(values_(r, c))) {
        throw DataError("non-finite value in design column '" + names_[c] + "' row " +
                        std::to_string(r));
      }
    }
  }
}

std::vector<double> FitResult::coefficients() const {
  std::vector<double> b;
  b.reserve(terms.size());
  for (const auto& t : terms) b.push_back(t.beta);
  return b;
}

FitResult ols_fit(const DesignMatrix& x, std::span<const double> y) {
  const std::size_t n = x.rows();
  const std::size_t k = x.cols();
  if (y.size() != n) throw ArgumentError("response length does not match design rows");
  if (n <= k) {
    throw DataError("need more observations (" + std::to_string(n) + ") than columns (" +
                    std::to_string(k) + ")");
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw DataError("non-finite response value");
  }
  bool constant = true;
  for (double v : y) constant = constant && v == y[0];
  if (constant) throw DataError("degenerate response: zero variance in y");

  const HouseholderQr qr(x.values());
  const auto beta = qr.solve(y, x.column_names());
  const auto fitted = x.values() * std::span<const double>(beta);

  FitResult fit;
  fit.n = n;
  fit.df_resid = n - k;
  fit.residuals.resize(n);
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(n);
  double rss = 0.0;
  double tss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    fit.residuals[i] = y[i] - fitted[i];
    rss += fit.residuals[i] * fit.residuals[i];
    tss += (y[i] - mean) * (y[i] - mean);
  }
  fit.sigma2 = rss / static_cast<double>(fit.df_resid);
  fit.r2 = 1.0 - rss / tss;
  fit.adj_r2 = 1.0 - (1.0 - fit.r2) * static_cast<double>(n - 1) / static_cast<double>(n - k);

  // (X^T X)^{-1} = R^{-1} R^{-T}; its diagonal is the squared row norms of R^{-1}.
  const auto r_inv = qr.r_inverse();
  const double df = static_cast<double>(fit.df_resid);
  for (std::size_t j = 0; j < k; ++j) {
    double diag = 0.0;
    for (std::size_t c = j; c < k; ++c) diag += r_inv(j, c) * r_inv(j, c);
    TermEstimate term;
    term.name = x.column_names()[j];
    term.beta = beta[j];
    term.se = std::sqrt(fit.sigma2 * diag);
    if (term.se > 0.0) {
      term.t_stat = term.beta / term.se;
    } else {
      term.t_stat = term.beta == 0.0 ? 0.0
                                     : std::copysign(std::numeric_limits<double>::infinity(), term.beta);
    }
    term.p_value = student_t_two_sided_p(term.t_stat, df);
    term.stars = significance_stars(term.p_value);
    fit.terms.push_back(std::move(term));
  }
  return fit;
}

}  // namespace wikivote
