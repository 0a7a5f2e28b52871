#include <cmath>
#include <limits>

#include "wikivote/error.hpp"
#include "wikivote/stats.hpp"

namespace wikivote {

namespace {

constexpr int kMaxIterations = 20000;
constexpr double kTolerance = 1e-12;
constexpr double kTiny = 1e-300;

// Continued fraction for I_x(a, b), modified Lentz.
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    // even step
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    // odd step
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kTolerance) return h;
  }
  throw Error("incomplete beta continued fraction did not converge");
}

// I_x(a, b) given both x and 1 - x, so callers can pass an accurate
// complement when x is close to 1.
double incomplete_beta(double a, double b, double x, double one_minus_x) {
  if (x <= 0.0) return 0.0;
  if (one_minus_x <= 0.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log(one_minus_x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, one_minus_x) / b;
}

void check_df(double df) {
  if (!(df >= 1.0) || !std::isfinite(df)) {
    throw ArgumentError("degrees of freedom must be >= 1");
  }
}

// P(|T| >= |t|) = I_{df/(df+t^2)}(df/2, 1/2).
double two_sided_tail(double t, double df) {
  if (std::isnan(t)) throw ArgumentError("t statistic is NaN");
  if (std::isinf(t)) return 0.0;
  if (t == 0.0) return 1.0;
  const double t2 = t * t;
  const double x = df / (df + t2);
  const double one_minus_x = t2 / (df + t2);
  return incomplete_beta(0.5 * df, 0.5, x, one_minus_x);
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw ArgumentError("incomplete beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw ArgumentError("incomplete beta needs x in [0,1]");
  return incomplete_beta(a, b, x, 1.0 - x);
}

double student_t_two_sided_p(double t, double df) {
  check_df(df);
  return two_sided_tail(t, df);
}

double student_t_p(double t, double df, Sides sides) {
  const double p = student_t_two_sided_p(t, df);
  return sides == Sides::two ? p : 0.5 * p;
}

double student_t_cdf(double t, double df) {
  check_df(df);
  const double tail = 0.5 * two_sided_tail(t, df);
  return t < 0.0 ? tail : 1.0 - tail;
}

double student_t_quantile(double prob, double df) {
  check_df(df);
  if (!(prob > 0.0 && prob < 1.0)) throw ArgumentError("quantile probability must be in (0,1)");
  if (prob == 0.5) return 0.0;
  double lo = -1.0;
  double hi = 1.0;
  while (student_t_cdf(lo, df) > prob) lo *= 2.0;
  while (student_t_cdf(hi, df) < prob) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (student_t_cdf(mid, df) < prob ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::string significance_stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  if (p < 0.1) return "†";
  return "";
}

}  // namespace wikivote
