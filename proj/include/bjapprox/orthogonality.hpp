#pragma once

// Birkhoff-James orthogonality: x is orthogonal to y when ||x + t y|| >= ||x||
// for every real t. Each decision procedure returns a verdict with the
// certificate that decided it.

#include <optional>

#include "bjapprox/dense.hpp"
#include "bjapprox/lp_core.hpp"
#include "bjapprox/matrix_operator.hpp"

namespace bjapprox {

inline constexpr double kDefaultTolerance = 1e-9;

/// margin is the signed relative slack of the deciding inequality; the verdict
/// is "orthogonal" exactly when margin >= -tol (ties count as orthogonal).
struct OrthogonalityVerdict {
  bool is_orthogonal = false;
  std::optional<Vector> witness;   // norm-attainment point certifying the verdict
  double margin = 0.0;
  std::optional<double> minimizer; // argmin of t -> ||x + t y|| when computed
};

/// Minimizes t -> ||x + t y||_p globally by golden section on
/// [-2||x||/||y|| - 1, 2||x||/||y|| + 1].
OrthogonalityVerdict bj_orthogonal_vectors(const LpVector& x, const LpVector& y, double tol = kDefaultTolerance);

enum class StrongOrthogonality { strong, orthogonal_not_strong, not_orthogonal };
const char* to_string(StrongOrthogonality s) noexcept;

struct StrongVerdict {
  StrongOrthogonality classification = StrongOrthogonality::not_orthogonal;
  /// Strict growth is certified only for |t| >= certification_radius.
  double certification_radius = 0.0;
  double growth_plus = 0.0;   // (phi(+delta) - phi(0)) / ||x||
  double growth_minus = 0.0;  // (phi(-delta) - phi(0)) / ||x||
  double minimizer = 0.0;
  double margin = 0.0;
};

StrongVerdict strong_bj_orthogonal(const LpVector& x, const LpVector& y, double delta,
                                   double tol = kDefaultTolerance);

struct SemiconeMembership {
  bool in_plus = false;   // ||x + t y|| >= ||x|| for t >= 0
  bool in_minus = false;  // ||x + t y|| >= ||x|| for t <= 0
  double derivative = 0.0;  // d/dt ||x + t y|| at t = 0, equals [y, x] / ||x||
};

/// On smooth l_p the one-sided derivatives coincide, so membership is decided
/// by the sign of [y, x] with slack tol * ||y||.
SemiconeMembership semicone_membership(const LpVector& x, const LpVector& y, double tol = kDefaultTolerance);

/// f is orthogonal to g iff g vanishes at the (unique up to sign) norm
/// attainment point of f. Witness: that point.
OrthogonalityVerdict bj_orthogonal_functionals(const Functional& f, const Functional& g,
                                               double tol = kDefaultTolerance);

/// Range of x -> <Bx, Ax> over the unit sphere of the top right-singular
/// subspace of B (the norm attainment set of B on Euclidean space).
struct AttainmentFormRange {
  Matrix top_space;  // orthonormal columns
  double norm = 0.0; // ||B||_2
  double lo = 0.0;
  double hi = 0.0;
  Vector lo_vector;  // unit vectors realizing lo and hi
  Vector hi_vector;
};

/// Orthonormal basis of the eigenspace of B^T B whose eigenvalues lie within
/// rel_tol * lambda_max of the top one.
Matrix top_right_singular_space(const Matrix& b, double rel_tol = 1e-9);

AttainmentFormRange attainment_form_range(const Matrix& b, const Matrix& a, double rel_tol = 1e-9);

/// A unit x in span{lo_vector, hi_vector} with <Bx, Ax> = 0, given lo <= 0 <= hi.
Vector zero_of_form(const AttainmentFormRange& range);

/// Euclidean-domain matrices: T is orthogonal to A iff <Tx, Ax> = 0 for some
/// x in M_T. Tolerance is relative to ||T|| ||A||.
OrthogonalityVerdict bj_orthogonal_matrices_hilbert(const MatrixOperator& t, const MatrixOperator& a,
                                                    double tol = kDefaultTolerance);

}  // namespace bjapprox
