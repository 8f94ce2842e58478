#include "bjapprox/matrix_operator.hpp"

#include <cmath>

#include "bjapprox/error.hpp"

namespace bjapprox {

const char* to_string(DomainNorm d) noexcept { return d == DomainNorm::euclidean ? "euclidean" : "sup"; }

MatrixOperator::MatrixOperator(Matrix matrix, DomainNorm domain, CodomainNorm codomain)
    : matrix_(std::move(matrix)), domain_(domain), codomain_(codomain) {
  if (matrix_.rows() == 0 || matrix_.cols() == 0) throw Error(ErrorCode::invalid_input, "operator matrix is empty");
  for (double x : matrix_.data())
    if (!std::isfinite(x)) throw Error(ErrorCode::invalid_input, "operator matrix has a non-finite entry");
}

bool MatrixOperator::compatible_with(const MatrixOperator& other) const noexcept {
  return rows() == other.rows() && cols() == other.cols() && domain_ == other.domain_ && codomain_ == other.codomain_;
}

MatrixOperator MatrixOperator::minus(double s, const MatrixOperator& other) const {
  if (!compatible_with(other)) throw Error(ErrorCode::dimension_mismatch, "operators of different shape or norm");
  return MatrixOperator(matrix_ - s * other.matrix_, domain_, codomain_);
}

MatrixOperator combination_residual(const MatrixOperator& t, std::span<const MatrixOperator> as,
                                    std::span<const double> coeffs) {
  if (as.size() != coeffs.size()) throw Error(ErrorCode::dimension_mismatch, "coefficient count differs from operators");
  Matrix m = t.matrix();
  for (std::size_t i = 0; i < as.size(); ++i) {
    if (!t.compatible_with(as[i])) throw Error(ErrorCode::dimension_mismatch, "operators of different shape or norm");
    m = m - coeffs[i] * as[i].matrix();
  }
  return MatrixOperator(std::move(m), t.domain_norm(), t.codomain_norm());
}

MatrixOperator linear_combination(std::span<const MatrixOperator> as, std::span<const double> coeffs) {
  if (as.empty()) throw Error(ErrorCode::invalid_input, "empty operator list");
  if (as.size() != coeffs.size()) throw Error(ErrorCode::dimension_mismatch, "coefficient count differs from operators");
  Matrix m(as[0].rows(), as[0].cols());
  for (std::size_t i = 0; i < as.size(); ++i) {
    if (!as[0].compatible_with(as[i])) throw Error(ErrorCode::dimension_mismatch, "operators of different shape or norm");
    m = m + coeffs[i] * as[i].matrix();
  }
  return MatrixOperator(std::move(m), as[0].domain_norm(), as[0].codomain_norm());
}

}  // namespace bjapprox
