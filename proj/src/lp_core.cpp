#include "bjapprox/lp_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bjapprox/error.hpp"

namespace bjapprox {

namespace {

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw Error(ErrorCode::invalid_input, std::string(what) + " has a non-finite entry");
}

double sign_of(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

/// sgn(v_i) (|v_i| / scale)^(r-1) with scale = ||v||_r.
Vector normalized_power(std::span<const double> v, double r, double scale) {
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = sign_of(v[i]) * std::pow(std::abs(v[i]) / scale, r - 1.0);
  return out;
}

}  // namespace

Exponent conjugate_exponent(double p) {
  if (!std::isfinite(p) || p <= 1.0) {
    throw Error(ErrorCode::invalid_exponent, "exponent must satisfy 1 < p < inf, got " + std::to_string(p));
  }
  return {p, p / (p - 1.0)};
}

LpVector::LpVector(Vector coords, Exponent exponent) : coords_(std::move(coords)), exponent_(exponent) {
  if (coords_.empty()) throw Error(ErrorCode::invalid_input, "vector must have at least one coordinate");
  require_finite(coords_, "vector");
}

Functional::Functional(Vector coeffs, Exponent exponent) : coeffs_(std::move(coeffs)), exponent_(exponent) {
  if (coeffs_.empty()) throw Error(ErrorCode::invalid_input, "functional must have at least one coefficient");
  require_finite(coeffs_, "functional");
}

double Functional::apply(std::span<const double> x) const {
  if (x.size() != coeffs_.size()) throw Error(ErrorCode::dimension_mismatch, "functional applied to wrong dimension");
  return dot(coeffs_, x);
}

double Functional::operator()(const LpVector& x) const {
  if (x.exponent() != exponent_.dual()) {
    throw Error(ErrorCode::dimension_mismatch, "functional applied to a vector of a different l_q space");
  }
  return apply(x.coords());
}

double Functional::norm() const { return lp_norm(coeffs_, exponent_.p); }

Functional omega(const LpVector& x) { return Functional(x.values(), x.exponent()); }

Subspace::Subspace(std::size_t ambient_dim, Matrix basis) : ambient_dim_(ambient_dim), basis_(std::move(basis)) {
  if (basis_.cols() > 0 && basis_.rows() != ambient_dim_) {
    throw Error(ErrorCode::dimension_mismatch, "basis rows differ from ambient dimension");
  }
  if (basis_.cols() > ambient_dim_) throw Error(ErrorCode::rank_deficient, "more basis vectors than dimensions");
  if (basis_.cols() == 0) {
    basis_ = Matrix(ambient_dim_, 0);
    return;
  }
  require_finite(basis_.data(), "basis");
  if (numerical_rank(basis_) != basis_.cols()) {
    throw Error(ErrorCode::rank_deficient, "basis vectors are linearly dependent");
  }
}

Subspace Subspace::span_of(const std::vector<Vector>& vectors, std::size_t ambient_dim) {
  return Subspace(ambient_dim, Matrix::from_columns(vectors, ambient_dim));
}

double lp_norm(std::span<const double> v, double p) {
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x) / scale, p);
  return scale * std::pow(s, 1.0 / p);
}

double lp_norm(const LpVector& v) { return lp_norm(v.coords(), v.space_p()); }

double sip(const LpVector& x, const LpVector& y) {
  if (x.size() != y.size() || x.exponent() != y.exponent()) {
    throw Error(ErrorCode::dimension_mismatch, "semi-inner-product of vectors from different spaces");
  }
  const double p = y.space_p();
  const double ny = lp_norm(y);
  if (ny == 0.0) return 0.0;
  // ||y||^(2-p) * sum x_i sgn(y_i)|y_i|^(p-1) = ||y|| * sum x_i sgn(y_i)(|y_i|/||y||)^(p-1)
  return ny * dot(x.coords(), normalized_power(y.coords(), p, ny));
}

Functional duality_map(const LpVector& h) {
  const double r = h.space_p();
  const double nh = lp_norm(h);
  if (nh == 0.0) throw Error(ErrorCode::degenerate_input, "duality map of the zero vector");
  // Acts on l_r, so its own Exponent is {r', r}.
  return Functional(normalized_power(h.coords(), r, nh), h.exponent().dual());
}

LpVector norm_attainment_point(const Functional& f) {
  const double p = f.exponent().p;
  const double na = f.norm();
  if (na == 0.0) throw Error(ErrorCode::degenerate_input, "norm attainment of the zero functional");
  return LpVector(normalized_power(f.coeffs(), p, na), f.exponent().dual());
}

Subspace nullspace_intersection(std::span<const Functional> gs, std::size_t n) {
  std::vector<Vector> rows;
  rows.reserve(gs.size());
  for (const auto& g : gs) {
    if (g.size() != n) throw Error(ErrorCode::dimension_mismatch, "functional dimension differs from n");
    rows.push_back(g.values());
  }
  if (rows.empty()) return Subspace(n, Matrix::identity(n));
  return Subspace(n, nullspace(Matrix::from_rows(rows, n)));
}

}  // namespace bjapprox
