#pragma once

#include <span>

#include "bjapprox/dense.hpp"

namespace bjapprox {

/// Norm on the domain of an operator: Euclidean (l_2) or sup (l_inf).
enum class DomainNorm { euclidean, sup };
/// Only Euclidean codomains are supported.
enum class CodomainNorm { euclidean };

const char* to_string(DomainNorm d) noexcept;

/// An m x n real matrix viewed as an operator between normed spaces. The norm
/// tags select the operator norm used throughout.
class MatrixOperator {
 public:
  MatrixOperator(Matrix matrix, DomainNorm domain = DomainNorm::euclidean,
                 CodomainNorm codomain = CodomainNorm::euclidean);

  const Matrix& matrix() const noexcept { return matrix_; }
  DomainNorm domain_norm() const noexcept { return domain_; }
  CodomainNorm codomain_norm() const noexcept { return codomain_; }
  std::size_t rows() const noexcept { return matrix_.rows(); }
  std::size_t cols() const noexcept { return matrix_.cols(); }

  Vector apply(std::span<const double> x) const { return matrix_ * x; }
  bool is_zero() const noexcept { return matrix_.max_abs() == 0.0; }

  /// Same shape and same norm tags.
  bool compatible_with(const MatrixOperator& other) const noexcept;

  /// this - s * other (tags of this are kept).
  MatrixOperator minus(double s, const MatrixOperator& other) const;

 private:
  Matrix matrix_;
  DomainNorm domain_;
  CodomainNorm codomain_;
};

/// T - sum coeffs_i * As_i.
MatrixOperator combination_residual(const MatrixOperator& t, std::span<const MatrixOperator> as,
                                    std::span<const double> coeffs);
/// sum coeffs_i * As_i (tags of As[0]).
MatrixOperator linear_combination(std::span<const MatrixOperator> as, std::span<const double> coeffs);

}  // namespace bjapprox
