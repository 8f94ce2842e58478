#include "bjapprox/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bjapprox/error.hpp"

namespace bjapprox {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw Error(ErrorCode::dimension_mismatch, "ragged matrix literal");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_columns(const std::vector<Vector>& columns, std::size_t n_rows) {
  Matrix m(n_rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != n_rows) {
      throw Error(ErrorCode::dimension_mismatch, "column length differs from row count");
    }
    m.set_column(j, columns[j]);
  }
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows, std::size_t n_cols) {
  Matrix m(rows.size(), n_cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != n_cols) {
      throw Error(ErrorCode::dimension_mismatch, "row length differs from column count");
    }
    std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + static_cast<std::ptrdiff_t>(i * n_cols));
  }
  return m;
}

Vector Matrix::column(std::size_t j) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

Vector Matrix::row(std::size_t i) const {
  return Vector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

void Matrix::set_column(std::size_t j, std::span<const double> v) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::frobenius_norm() const { return norm2(data_); }

double Matrix::max_abs() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw Error(ErrorCode::dimension_mismatch, "matrix product shapes");
  Matrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Vector operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols_ != x.size()) throw Error(ErrorCode::dimension_mismatch, "matrix-vector shapes");
  Vector y(a.rows_, 0.0);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols_; ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorCode::dimension_mismatch, "matrix sum shapes");
  Matrix c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorCode::dimension_mismatch, "matrix difference shapes");
  Matrix c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
  return c;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix c = a;
  for (double& x : c.data_) x *= s;
  return c;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::dimension_mismatch, "dot product lengths");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) {
  double scale = 0.0;
  for (double x : a) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double x : a) {
    const double t = x / scale;
    s += t * t;
  }
  return scale * std::sqrt(s);
}

Vector scaled(std::span<const double> a, double s) {
  Vector out(a.begin(), a.end());
  for (double& x : out) x *= s;
  return out;
}

Vector axpy(std::span<const double> a, double s, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::dimension_mismatch, "axpy lengths");
  Vector out(a.begin(), a.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += s * b[i];
  return out;
}

Vector subtract(std::span<const double> a, std::span<const double> b) { return axpy(a, -1.0, b); }

Vector transpose_times(const Matrix& a, std::span<const double> x) {
  if (a.rows() != x.size()) throw Error(ErrorCode::dimension_mismatch, "transpose-vector shapes");
  Vector y(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[j] += a(i, j) * x[i];
  return y;
}

namespace {

double off_diagonal_mass(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

SymmetricEigen symmetric_eigen(const Matrix& m) {
  const std::size_t n = m.rows();
  if (m.cols() != n) throw Error(ErrorCode::invalid_input, "eigen decomposition needs a square matrix");
  const double scale = m.max_abs();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * scale) {
        throw Error(ErrorCode::invalid_input, "matrix is not symmetric");
      }

  Matrix a = m;
  // Symmetrize exactly so rotations see identical (i,j) and (j,i) entries.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (m(i, j) + m(j, i));
  Matrix v = Matrix::identity(n);

  const double target = 1e-14 * m.frobenius_norm();
  for (int sweep = 0; sweep < 100 && off_diagonal_mass(a) > target; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        if (s == 0.0) continue;
        rotated = true;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  SymmetricEigen out{Vector(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

double spectral_norm(const Matrix& a) {
  if (a.empty()) return 0.0;
  const auto eig = symmetric_eigen(a.transpose() * a);
  return std::sqrt(std::max(0.0, eig.values.front()));
}

SingularValueDecomposition svd(const Matrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  Matrix w = a;  // becomes U * Sigma
  Matrix v = Matrix::identity(n);

  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += w(i, p) * w(i, p);
          beta += w(i, q) * w(i, q);
          gamma += w(i, p) * w(i, q);
        }
        if (gamma == 0.0 || std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta)) continue;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        rotated = true;
        for (std::size_t i = 0; i < m; ++i) {
          const double wp = w(i, p);
          const double wq = w(i, q);
          w(i, p) = c * wp - s * wq;
          w(i, q) = s * wp + c * wq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vp = v(i, p);
          const double vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  Vector sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = norm2(w.column(j));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

  SingularValueDecomposition out{Vector(n), Matrix(m, n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.singular_values[k] = sigma[j];
    for (std::size_t i = 0; i < n; ++i) out.v(i, k) = v(i, j);
    if (sigma[j] > 0.0)
      for (std::size_t i = 0; i < m; ++i) out.u(i, k) = w(i, j) / sigma[j];
  }
  return out;
}

namespace {

std::size_t rank_from(const Vector& sigma, double tol) {
  if (sigma.empty() || sigma.front() == 0.0) return 0;
  std::size_t r = 0;
  for (double s : sigma)
    if (s > tol * sigma.front()) ++r;
  return r;
}

}  // namespace

std::size_t numerical_rank(const Matrix& a, double tol) {
  if (a.empty()) return 0;
  return rank_from(svd(a).singular_values, tol);
}

Matrix nullspace(const Matrix& a, double tol) {
  const std::size_t n = a.cols();
  if (a.rows() == 0) return Matrix::identity(n);
  const auto dec = svd(a);
  const std::size_t r = rank_from(dec.singular_values, tol);
  Matrix basis(n, n - r);
  for (std::size_t k = r; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) basis(i, k - r) = dec.v(i, k);
  return basis;
}

Matrix orthogonal_complement(const Matrix& a, double tol) {
  const std::size_t n = a.rows();
  const std::size_t k = a.cols();
  if (k == 0) return Matrix::identity(n);

  // Householder QR with column pivoting; Q accumulated explicitly.
  Matrix r = a;
  Matrix q = Matrix::identity(n);
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  const double scale = r.frobenius_norm();
  std::size_t rank = 0;
  for (std::size_t step = 0; step < std::min(n, k); ++step) {
    std::size_t best = step;
    double best_norm = -1.0;
    for (std::size_t j = step; j < k; ++j) {
      double s = 0.0;
      for (std::size_t i = step; i < n; ++i) s += r(i, j) * r(i, j);
      if (s > best_norm) {
        best_norm = s;
        best = j;
      }
    }
    if (std::sqrt(best_norm) <= tol * scale) break;
    if (best != step) {
      for (std::size_t i = 0; i < n; ++i) std::swap(r(i, step), r(i, best));
      std::swap(perm[step], perm[best]);
    }
    Vector x(n - step);
    for (std::size_t i = step; i < n; ++i) x[i - step] = r(i, step);
    const double alpha = (x[0] >= 0 ? -1.0 : 1.0) * norm2(x);
    x[0] -= alpha;
    const double vnorm = norm2(x);
    if (vnorm > 0.0) {
      for (double& xi : x) xi /= vnorm;
      for (std::size_t j = 0; j < k; ++j) {
        double s = 0.0;
        for (std::size_t i = step; i < n; ++i) s += x[i - step] * r(i, j);
        for (std::size_t i = step; i < n; ++i) r(i, j) -= 2.0 * s * x[i - step];
      }
      for (std::size_t row = 0; row < n; ++row) {
        double s = 0.0;
        for (std::size_t i = step; i < n; ++i) s += q(row, i) * x[i - step];
        for (std::size_t i = step; i < n; ++i) q(row, i) -= 2.0 * s * x[i - step];
      }
    }
    ++rank;
  }
  Matrix out(n, n - rank);
  for (std::size_t j = rank; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) out(i, j - rank) = q(i, j);
  return out;
}

Vector least_squares(const Matrix& a, std::span<const double> b, double tol) {
  if (a.rows() != b.size()) throw Error(ErrorCode::dimension_mismatch, "least-squares right-hand side");
  const auto dec = svd(a);
  const std::size_t r = rank_from(dec.singular_values, tol);
  Vector x(a.cols(), 0.0);
  for (std::size_t k = 0; k < r; ++k) {
    double ub = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) ub += dec.u(i, k) * b[i];
    const double coef = ub / dec.singular_values[k];
    for (std::size_t i = 0; i < a.cols(); ++i) x[i] += coef * dec.v(i, k);
  }
  return x;
}

}  // namespace bjapprox
