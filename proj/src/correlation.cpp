#include <algorithm>
#include <cmath>

#include "wikivote/error.hpp"
#include "wikivote/stats.hpp"

namespace wikivote {

double correlation_adj_r2(double r, std::size_t n) {
  if (n < 3) throw ArgumentError("adjusted R^2 of a correlation needs n >= 3");
  return 1.0 - (1.0 - r * r) * static_cast<double>(n - 1) / static_cast<double>(n - 2);
}

CorrelationResult pearson(std::span<const double> x, std::span<const double> y, Sides sides) {
  if (x.size() != y.size()) throw ArgumentError("pearson: inputs differ in length");
  const std::size_t n = x.size();
  if (n < 3) throw ArgumentError("pearson: need at least 3 pairs");

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!std::isfinite(sxx) || !std::isfinite(syy) || !std::isfinite(sxy)) {
    throw DataError("pearson: non-finite input");
  }
  if (sxx == 0.0 || syy == 0.0) throw DataError("pearson: zero variance");

  CorrelationResult out;
  out.n = n;
  out.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double df = static_cast<double>(n - 2);
  const double one_minus_r2 = 1.0 - out.r * out.r;
  const double t = one_minus_r2 > 0.0
                       ? out.r * std::sqrt(df / one_minus_r2)
                       : std::copysign(std::numeric_limits<double>::infinity(), out.r);
  out.p_value = student_t_p(t, df, sides);
  out.adj_r2 = correlation_adj_r2(out.r, n);
  return out;
}

}  // namespace wikivote
