#pragma once

// Finite-dimensional l_p geometry: exponents, vectors, functionals,
// subspaces, the semi-inner-product and the duality map.
//
// Convention: an LpVector with Exponent {p, q} lives in l_p^n. A Functional
// with Exponent {p, q} acts on l_q^n and has norm ||a||_p. Under this
// convention the canonical isometry l_p^n -> (l_q^n)^* keeps the exponent:
// omega(x) has the same coefficients and the same Exponent as x.

#include <cstddef>
#include <span>
#include <vector>

#include "bjapprox/dense.hpp"

namespace bjapprox {

/// A Hoelder pair 1 < p < inf with 1/p + 1/q = 1.
struct Exponent {
  double p = 2.0;
  double q = 2.0;

  /// The pair with the roles of p and q exchanged.
  Exponent dual() const noexcept { return {q, p}; }

  friend bool operator==(const Exponent&, const Exponent&) = default;
};

/// Throws invalid_exponent unless 1 < p < inf.
Exponent conjugate_exponent(double p);

class LpVector {
 public:
  LpVector(Vector coords, Exponent exponent);

  std::span<const double> coords() const noexcept { return coords_; }
  const Vector& values() const noexcept { return coords_; }
  const Exponent& exponent() const noexcept { return exponent_; }
  std::size_t size() const noexcept { return coords_.size(); }
  /// The exponent of the ambient norm.
  double space_p() const noexcept { return exponent_.p; }

 private:
  Vector coords_;
  Exponent exponent_;
};

class Functional {
 public:
  Functional(Vector coeffs, Exponent exponent);

  std::span<const double> coeffs() const noexcept { return coeffs_; }
  const Vector& values() const noexcept { return coeffs_; }
  const Exponent& exponent() const noexcept { return exponent_; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  /// a(x) = sum a_i x_i; x must live in l_q^n.
  double operator()(const LpVector& x) const;
  double apply(std::span<const double> x) const;
  /// ||a||_p.
  double norm() const;

 private:
  Vector coeffs_;
  Exponent exponent_;
};

/// The canonical isometry l_p^n -> (l_q^n)^*.
Functional omega(const LpVector& x);

class Subspace {
 public:
  /// Validates full column rank (singular values against kRankTolerance).
  /// A zero-column basis describes {0}.
  Subspace(std::size_t ambient_dim, Matrix basis);

  std::size_t ambient_dim() const noexcept { return ambient_dim_; }
  std::size_t rank() const noexcept { return basis_.cols(); }
  const Matrix& basis() const noexcept { return basis_; }
  bool is_zero() const noexcept { return basis_.cols() == 0; }

  static Subspace span_of(const std::vector<Vector>& vectors, std::size_t ambient_dim);

 private:
  std::size_t ambient_dim_;
  Matrix basis_;
};

/// (sum |v_i|^p)^(1/p), computed with scaling so large or tiny entries do not
/// overflow.
double lp_norm(std::span<const double> v, double p);
double lp_norm(const LpVector& v);

/// The unique semi-inner-product on l_p^n:
///   [x, y] = ||y||_p^(2-p) * sum_i x_i sgn(y_i) |y_i|^(p-1),  [x, 0] = 0.
double sip(const LpVector& x, const LpVector& y);

/// The norm-one functional attaining its norm at h / ||h||. For h in l_r^n the
/// result has coefficients sgn(h_i)|h_i|^(r-1) / ||h||_r^(r-1) and acts on l_r^n.
Functional duality_map(const LpVector& h);

/// The unit vector x in l_q^n with f(x) = ||f||. Unique because l_q^n is
/// strictly convex; the representative with f(x) = +||f|| is returned.
LpVector norm_attainment_point(const Functional& f);

/// Orthonormal basis of the common kernel of the functionals, which must all
/// have n coefficients. An empty list yields the whole space.
Subspace nullspace_intersection(std::span<const Functional> gs, std::size_t n);

}  // namespace bjapprox
