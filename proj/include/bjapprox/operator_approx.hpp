#pragma once

// Best approximation of matrices, viewed as operators, out of the span of
// other matrices. Domains carry the Euclidean or the sup norm; codomains are
// Euclidean.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bjapprox/dense.hpp"
#include "bjapprox/matrix_operator.hpp"

namespace bjapprox {

enum class AttainmentKind { sphere_of_subspace, sign_pattern_list };
const char* to_string(AttainmentKind k) noexcept;

/// M_T, the unit vectors where ||Tx|| = ||T||.
struct NormAttainmentSet {
  AttainmentKind kind = AttainmentKind::sphere_of_subspace;
  std::optional<Matrix> subspace;  // orthonormal basis of the top eigenspace of T^T T
  std::vector<Vector> patterns;    // maximizing sign vectors, both signs listed
  /// M_T = D u (-D) for a connected D: a subspace sphere, a single pair of
  /// patterns, or patterns joined by edges along which T is constant.
  bool is_pm_connected = false;
};

struct OperatorNorm {
  double norm = 0.0;
  NormAttainmentSet attainment;
};

/// Spectral norm for Euclidean domains, 2^(n-1) sign patterns for sup
/// domains (n <= 20). Patterns within 1e-9 relative of the maximum count as
/// attaining.
OperatorNorm operator_norm(const MatrixOperator& b);

/// As operator_norm, but T = 0 is a degenerate input.
NormAttainmentSet norm_attainment_set(const MatrixOperator& t);

struct OneDimApprox {
  double lambda0 = 0.0;
  double dist = 0.0;
  bool exact = false;  // T = lambda0 * A
};

/// Minimizes lambda -> ||T - lambda A||: bracket expansion around center,
/// golden section, then bisection on the subdifferential.
OneDimApprox best_approx_operator_1d(const MatrixOperator& t, const MatrixOperator& a,
                                     std::optional<double> center = std::nullopt);

/// One-sided slopes of lambda -> ||T - lambda A|| at lambda: the interval of
/// -<Bx, Ax> / ||B|| over x in M_B, B = T - lambda A.
struct SlopeInterval {
  double lo = 0.0;
  double hi = 0.0;
};
SlopeInterval subdifferential_1d(const MatrixOperator& t, const MatrixOperator& a, double lambda);

struct LambdaCondition {
  bool valid = false;
  Vector witness;     // x in M_{T - lambda0 A}, with <Tx, Ax> = lambda0 ||Ax||^2 when valid
  double margin = 0.0;
};

/// Is there x in M_{T - lambda0 A} with <Tx, Ax> = lambda0 ||Ax||^2?
LambdaCondition hilbert_lambda_condition(const MatrixOperator& t, const MatrixOperator& a, double lambda0,
                                         double tol = 1e-9);

/// max over unit x of ||(I - P_{Ax}) Tx||, P the orthogonal projection onto
/// span{Ax}; equal to ||Tx|| when Ax = 0.
double projected_residual(const Matrix& t, const Matrix& a, std::span<const double> x);

struct ConstrainedMax {
  double value = 0.0;
  Vector maximizer;
};

/// Euclidean domain: Riemannian gradient ascent on the unit sphere from the
/// right singular vectors of T and seeded random starts.
ConstrainedMax constrained_max_euclidean(const Matrix& t, const Matrix& a, std::uint64_t seed = 42, int restarts = 8);

/// Sup domain, n <= 3: a grid of about 10^3 points on every face of the cube,
/// followed by pattern-search refinement inside the face.
ConstrainedMax constrained_max_sup(const Matrix& t, const Matrix& a);

/// dist(T, span{A}) as the constrained maximum over a Euclidean domain.
double dist_formula_hilbert(const MatrixOperator& t, const MatrixOperator& a, std::uint64_t seed = 42,
                            int restarts = 8);

struct SmoothCodomainDistance {
  double value = 0.0;
  Vector maximizer;
  double lambda0 = 0.0;
  /// Whether M_{T - lambda0 A} has the +-D form. Without it the constrained
  /// maximum is only a lower bound for the distance.
  bool hypothesis_satisfied = false;
};

/// dist(T, span{A}) for a sup-domain T as the constrained maximum over the
/// l_inf sphere (n <= 3).
SmoothCodomainDistance dist_formula_smooth_codomain(const MatrixOperator& t, const MatrixOperator& a);

/// ||T|| as the constrained maximum, for T orthogonal to A. Checks the
/// orthogonality (and, for sup domains, the +-D form of M_T) first, and the
/// agreement with operator_norm(T) within rel_tol afterwards.
double lemma_norm_eval(const MatrixOperator& t, const MatrixOperator& a, std::uint64_t seed = 42,
                       double rel_tol = 1e-6);

struct CertificateSample {
  Vector beta;
  std::optional<Vector> gamma;  // absent when the search failed
  double norm_beta = 0.0;       // ||T - sum beta_i A_i||
  double max_beta = 0.0;
  double max_alpha = 0.0;
  bool ok = false;
};

struct NdimCertificateReport {
  bool holds = false;
  bool inconclusive = false;  // some gamma search failed and no sample failed
  bool degenerate = false;    // T in span(A_i)
  double norm_alpha = 0.0;    // ||T - sum alpha_i A_i||
  std::vector<CertificateSample> samples;
};

/// Checks the n-dimensional best-approximation certificate for Euclidean
/// operators on every sampled beta: find gamma with
/// (T - sum beta_i A_i) orthogonal to sum gamma_i A_i, then compare the two
/// constrained maxima with ||T - sum beta_i A_i|| and ||T - sum alpha_i A_i||.
NdimCertificateReport verify_ndim_certificate_hilbert(const MatrixOperator& t, std::span<const MatrixOperator> as,
                                                      std::span<const double> alpha,
                                                      std::span<const Vector> beta_samples, std::uint64_t seed = 42,
                                                      double rel_tol = 1e-6);

}  // namespace bjapprox
