#pragma once

#include <span>
#include <string>
#include <vector>

#include "wikivote/linalg.hpp"

namespace wikivote {

// Regressor matrix with named columns; column 0 is the intercept (all ones).
// Construction rejects non-finite entries, a missing intercept and a
// name/column count mismatch. The n > cols requirement is checked by ols_fit
// so the same type can carry prediction designs.
class DesignMatrix {
 public:
  DesignMatrix(Matrix values, std::vector<std::string> column_names);

  std::size_t rows() const { return values_.rows(); }
  std::size_t cols() const { return values_.cols(); }
  const Matrix& values() const { return values_; }
  const std::vector<std::string>& column_names() const { return names_; }

 private:
  Matrix values_;
  std::vector<std::string> names_;
};

enum class Sides { two, one };

struct TermEstimate {
  std::string name;
  double beta = 0.0;
  double se = 0.0;
  double t_stat = 0.0;
  double p_value = 1.0;
  std::string stars;
};

struct FitResult {
  std::vector<TermEstimate> terms;
  double r2 = 0.0;
  double adj_r2 = 0.0;
  std::size_t n = 0;
  std::size_t df_resid = 0;
  std::vector<double> residuals;
  double sigma2 = 0.0;

  std::vector<double> coefficients() const;
};

// Plain OLS with the usual diagnostics:
//   sigma2 = |r|^2 / (n - k),  se_j = sqrt(sigma2 [(X^T X)^{-1}]_jj) via R^{-1},
//   r2 = 1 - |r|^2 / |y - mean(y)|^2,  adj_r2 = 1 - (1 - r2)(n - 1)/(n - k),
//   two-sided Student-t p-values on n - k degrees of freedom.
// Throws DataError for n <= k or a constant response ("degenerate response"),
// SingularMatrixError for a rank-deficient design.
FitResult ols_fit(const DesignMatrix& x, std::span<const double> y);

// *** p<0.001, ** p<0.01, * p<0.05, † p<0.1, else "".
std::string significance_stars(double p);

// Regularised incomplete beta I_x(a, b), continued fraction evaluated with
// the modified Lentz method to relative tolerance 1e-12.
double regularized_incomplete_beta(double a, double b, double x);

// P(|T_df| >= |t|). Throws ArgumentError for df < 1.
double student_t_two_sided_p(double t, double df);
// Sides::one gives P(T_df >= |t|), half the two-sided value.
double student_t_p(double t, double df, Sides sides);
// CDF of Student's t.
double student_t_cdf(double t, double df);
// Inverse CDF, for 0 < prob < 1.
double student_t_quantile(double prob, double df);

struct CorrelationResult {
  double r = 0.0;
  std::size_t n = 0;
  double p_value = 1.0;
  double adj_r2 = 0.0;
};

// 1 - (1 - r^2)(n - 1)/(n - 2).
double correlation_adj_r2(double r, std::size_t n);

// Sample Pearson correlation with the t = r sqrt((n-2)/(1-r^2)) test on
// n - 2 degrees of freedom. Throws ArgumentError for mismatched lengths or
// n < 3 and DataError("zero variance") for a constant input.
CorrelationResult pearson(std::span<const double> x, std::span<const double> y,
                          Sides sides = Sides::two);

}  // namespace wikivote
