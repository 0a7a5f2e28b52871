#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace wikivote {

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::vector<double> column(std::size_t c) const;

  Matrix transposed() const;
  // Largest absolute entry.
  double max_abs() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
std::vector<double> operator*(const Matrix& a, std::span<const double> x);
Matrix operator-(const Matrix& a, const Matrix& b);

// Householder QR of an n x k matrix with n >= k: A = Q R, Q n x k with
// orthonormal columns, R k x k upper triangular.
class HouseholderQr {
 public:
  explicit HouseholderQr(const Matrix& a);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return r_.cols(); }

  // Thin Q (n x k) and R (k x k), formed explicitly.
  Matrix q() const;
  Matrix r() const;

  // First column j with |R_jj| < tolerance * max_i |R_ii|, or cols() when the
  // factor has full column rank.
  std::size_t first_deficient_column(double tolerance = 1e-10) const;

  // Least-squares solution of A b = y. Throws SingularMatrixError naming the
  // offending column (from `names` when given) on rank deficiency.
  std::vector<double> solve(std::span<const double> y,
                            std::span<const std::string> names = {}) const;

  // Q^T y, length n.
  std::vector<double> apply_qt(std::span<const double> y) const;

  // R^{-1}, upper triangular. Requires full rank.
  Matrix r_inverse() const;

 private:
  void apply_reflector(std::size_t j, std::span<double> v) const;

  std::size_t rows_ = 0;
  Matrix r_;
  // reflectors_[j] is the unit vector v_j acting on rows j..n-1 as
  // I - 2 v v^T; empty when column j was already zero below the diagonal.
  std::vector<std::vector<double>> reflectors_;
};

// argmin_b |y - X b|^2 via Householder QR and back-substitution.
std::vector<double> qr_solve(const Matrix& x, std::span<const double> y,
                             std::span<const std::string> names = {});

}  // namespace wikivote
