#pragma once

// Small dense linear algebra for desk-scale problems (dimensions up to ~20).
// Row-major storage, value semantics, no external dependencies.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace bjapprox {

using Vector = std::vector<double>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  /// Builds a matrix whose columns are the given vectors (all of equal length).
  static Matrix from_columns(const std::vector<Vector>& columns, std::size_t n_rows);
  static Matrix from_rows(const std::vector<Vector>& rows, std::size_t n_cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> data() const noexcept { return data_; }

  Vector column(std::size_t j) const;
  Vector row(std::size_t i) const;
  void set_column(std::size_t j, std::span<const double> v);

  Matrix transpose() const;
  double frobenius_norm() const;
  double max_abs() const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Vector operator*(const Matrix& a, std::span<const double> x);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator*(double s, const Matrix& a);
  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
Vector scaled(std::span<const double> a, double s);
/// a + s * b
Vector axpy(std::span<const double> a, double s, std::span<const double> b);
Vector subtract(std::span<const double> a, std::span<const double> b);
Vector transpose_times(const Matrix& a, std::span<const double> x);

struct SymmetricEigen {
  Vector values;        // descending
  Matrix vectors;       // column j pairs with values[j]
};

/// Cyclic Jacobi rotations. Throws invalid_input when m is not symmetric
/// within 1e-12 * max|m|.
SymmetricEigen symmetric_eigen(const Matrix& m);

/// Largest singular value, via symmetric_eigen of a^T a.
double spectral_norm(const Matrix& a);

struct SingularValueDecomposition {
  Vector singular_values;  // descending, length n (columns of the input)
  Matrix u;                // m x n, columns scaled to unit length where sigma > 0
  Matrix v;                // n x n orthogonal
};

/// One-sided Jacobi SVD of an m x n matrix (any shape).
SingularValueDecomposition svd(const Matrix& a);

inline constexpr double kRankTolerance = 1e-10;

/// Numerical rank with singular values compared against tol * sigma_max.
std::size_t numerical_rank(const Matrix& a, double tol = kRankTolerance);

/// Orthonormal basis (as columns) of {x : a x = 0}, computed from the SVD.
Matrix nullspace(const Matrix& a, double tol = kRankTolerance);

/// Orthonormal basis (as columns) of the Euclidean orthogonal complement of
/// the column space of a, computed by Householder QR. Independent code path
/// from nullspace(); both describe the same subspace for a.transpose().
Matrix orthogonal_complement(const Matrix& a, double tol = kRankTolerance);

/// Minimum-norm least-squares solution of a x = b via the SVD pseudo-inverse.
Vector least_squares(const Matrix& a, std::span<const double> b, double tol = kRankTolerance);

}  // namespace bjapprox
