#include "wikivote/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "wikivote/error.hpp"

namespace wikivote {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::vector<double> Matrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw ArgumentError("matrix product shape mismatch");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

std::vector<double> operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw ArgumentError("matrix-vector product shape mismatch");
  std::vector<double> out(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    out[i] = s;
  }
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ArgumentError("matrix shape mismatch");
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
  }
  return out;
}

HouseholderQr::HouseholderQr(const Matrix& a) : rows_(a.rows()), r_(a.cols(), a.cols()) {
  const std::size_t n = a.rows();
  const std::size_t k = a.cols();
  if (n < k) throw ArgumentError("QR needs at least as many rows as columns");

  Matrix work = a;
  reflectors_.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    double norm2 = 0.0;
    for (std::size_t i = j; i < n; ++i) norm2 += work(i, j) * work(i, j);
    const double norm = std::sqrt(norm2);
    if (norm > 0.0) {
      const double alpha = -std::copysign(norm, work(j, j));
      std::vector<double> v(n - j);
      for (std::size_t i = j; i < n; ++i) v[i - j] = work(i, j);
      v[0] -= alpha;
      double vnorm2 = 0.0;
      for (double e : v) vnorm2 += e * e;
      const double vnorm = std::sqrt(vnorm2);
      for (double& e : v) e /= vnorm;
      for (std::size_t c = j; c < k; ++c) {
        double s = 0.0;
        for (std::size_t i = j; i < n; ++i) s += v[i - j] * work(i, c);
        for (std::size_t i = j; i < n; ++i) work(i, c) -= 2.0 * s * v[i - j];
      }
      work(j, j) = alpha;
      reflectors_[j] = std::move(v);
    }
    for (std::size_t c = j; c < k; ++c) r_(j, c) = work(j, c);
  }
}

void HouseholderQr::apply_reflector(std::size_t j, std::span<double> v) const {
  const auto& h = reflectors_[j];
  if (h.empty()) return;
  double s = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) s += h[i] * v[j + i];
  for (std::size_t i = 0; i < h.size(); ++i) v[j + i] -= 2.0 * s * h[i];
}

Matrix HouseholderQr::q() const {
  const std::size_t k = cols();
  Matrix q(rows_, k);
  std::vector<double> e(rows_);
  for (std::size_t c = 0; c < k; ++c) {
    std::fill(e.begin(), e.end(), 0.0);
    e[c] = 1.0;
    for (std::size_t j = k; j-- > 0;) apply_reflector(j, e);
    for (std::size_t i = 0; i < rows_; ++i) q(i, c) = e[i];
  }
  return q;
}

Matrix HouseholderQr::r() const { return r_; }

std::size_t HouseholderQr::first_deficient_column(double tolerance) const {
  double max_diag = 0.0;
  for (std::size_t j = 0; j < cols(); ++j) max_diag = std::max(max_diag, std::abs(r_(j, j)));
  for (std::size_t j = 0; j < cols(); ++j) {
    if (!(std::abs(r_(j, j)) >= tolerance * max_diag) || r_(j, j) == 0.0) return j;
  }
  return cols();
}

std::vector<double> HouseholderQr::apply_qt(std::span<const double> y) const {
  if (y.size() != rows_) throw ArgumentError("response length does not match design rows");
  std::vector<double> z(y.begin(), y.end());
  for (std::size_t j = 0; j < cols(); ++j) apply_reflector(j, z);
  return z;
}

std::vector<double> HouseholderQr::solve(std::span<const double> y,
                                         std::span<const std::string> names) const {
  const std::size_t k = cols();
  if (const auto bad = first_deficient_column(); bad < k) {
    throw SingularMatrixError(bad < names.size() ? names[bad] : "#" + std::to_string(bad));
  }
  auto z = apply_qt(y);
  std::vector<double> b(k);
  for (std::size_t j = k; j-- > 0;) {
    double s = z[j];
    for (std::size_t c = j + 1; c < k; ++c) s -= r_(j, c) * b[c];
    b[j] = s / r_(j, j);
  }
  return b;
}

Matrix HouseholderQr::r_inverse() const {
  const std::size_t k = cols();
  if (const auto bad = first_deficient_column(); bad < k) {
    throw SingularMatrixError("#" + std::to_string(bad));
  }
  Matrix inv(k, k);
  for (std::size_t col = 0; col < k; ++col) {
    for (std::size_t j = col + 1; j-- > 0;) {
      double s = j == col ? 1.0 : 0.0;
      for (std::size_t c = j + 1; c <= col; ++c) s -= r_(j, c) * inv(c, col);
      inv(j, col) = s / r_(j, j);
    }
  }
  return inv;
}

std::vector<double> qr_solve(const Matrix& x, std::span<const double> y,
                             std::span<const std::string> names) {
  return HouseholderQr(x).solve(y, names);
}

}  // namespace wikivote
