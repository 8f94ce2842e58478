#pragma once

// Definition-level solvers used to cross-check the duality routes. These
// optimize for trustworthiness, not speed.

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "bjapprox/dense.hpp"
#include "bjapprox/lp_core.hpp"
#include "bjapprox/matrix_operator.hpp"

namespace bjapprox::oracle {

struct OracleReport {
  double value = 0.0;
  Vector minimizer;
  int iterations = 0;
  bool converged = false;
  /// Euclidean norm of the gradient of the objective at the minimizer for
  /// smooth problems; final polishing bracket width for operator problems.
  double stationarity = 0.0;
  std::vector<double> trace;  // objective value after each accepted step
};

/// min over alpha of ||x - basis * alpha||_p. Newton-preconditioned descent
/// with Armijo backtracking on sum (r_i^2 + eps^2)^(p/2), warm-started at the
/// Euclidean projection. The reported value is the unsmoothed norm.
OracleReport primal_min_lp(std::span<const double> x, const Subspace& y, double p);
OracleReport primal_min_lp(const LpVector& x, const Subspace& y);

/// The primal objective alpha -> ||x - basis * alpha||_p.
double primal_objective_lp(std::span<const double> x, const Subspace& y, double p, std::span<const double> alpha);

/// Operator norm: spectral norm for Euclidean domains, maximum over sign
/// vectors for sup domains.
double operator_norm_value(const Matrix& b, DomainNorm domain);

/// min over beta of ||T - sum beta_i A_i||. k = 1 is pure golden section; for
/// k > 1 seeded subgradient descent followed (k <= 3) by nested golden-section
/// polishing over a box that provably contains every minimizer.
OracleReport primal_min_operator(const MatrixOperator& t, std::span<const MatrixOperator> as, std::uint64_t seed = 42);

enum class SphereKind { euclidean, sup };

struct GridMaxProblem {
  std::size_t dim = 2;
  SphereKind sphere = SphereKind::euclidean;
  std::function<double(std::span<const double>)> objective;
  /// Linear constraints c . x = 0 (Euclidean spheres only).
  std::vector<Vector> constraints;
  /// Lipschitz constant of the objective on the sphere, if known.
  double lipschitz = std::numeric_limits<double>::quiet_NaN();
};

struct GridMaxReport {
  double value = 0.0;         // best value found (a lower estimate)
  Vector maximizer;
  double upper_estimate = 0.0;  // coarse max + lipschitz * grid step (NaN without lipschitz)
  double error_bound = 0.0;     // lipschitz * grid step (NaN without lipschitz)
  std::size_t evaluations = 0;
};

/// Dense-grid maximization over the unit sphere of dimension <= 3 with local
/// refinement. resolution is the number of grid points per parameter axis.
GridMaxReport grid_max_constrained(const GridMaxProblem& problem, std::size_t resolution = 400);

}  // namespace bjapprox::oracle
