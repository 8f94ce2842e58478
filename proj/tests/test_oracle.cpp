#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bjapprox/error.hpp"
#include "bjapprox/oracle.hpp"
#include "support/test_support.hpp"

using namespace bjapprox;
using testing_support::naive_lp_norm;
using testing_support::rel_diff;
using testing_support::Rng;

TEST_CASE("p = 2 reduces to the Euclidean projection") {
  Rng rng(61);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(2, 7));
    const std::size_t k = static_cast<std::size_t>(rng.integer(1, static_cast<int>(n) - 1));
    const Vector x = rng.normal_vector(n);
    const Matrix b = rng.normal_matrix(n, k);
    // Orthonormal complement of the column space gives the residual directly.
    const Matrix perp = orthogonal_complement(b);
    const Vector coords = transpose_times(perp, x);
    const double expected = norm2(coords);
    const auto rep = oracle::primal_min_lp(x, Subspace(n, b), 2.0);
    CHECK(rel_diff(rep.value, expected) <= 1e-10);
    CHECK(rep.converged);
  }
}

TEST_CASE("worked three-dimensional example") {
  const Subspace y(3, Matrix{{1, 1}, {0, 2}, {-1, 1}});
  const auto rep = oracle::primal_min_lp(Vector{1, 2, 4}, y, 3.0);
  CHECK(rel_diff(rep.value, 1.4422495703074083) <= 1e-9);
  CHECK(rel_diff(rep.value, std::cbrt(3.0)) <= 1e-9);

  const auto member = oracle::primal_min_lp(Vector{2, 2, 0}, y, 3.0);
  CHECK(member.value <= 1e-12);

  CHECK_THROWS_AS(oracle::primal_min_lp(Vector{1, 2}, y, 3.0), Error);
}

TEST_CASE("the primal objective is convex and the descent is monotone") {
  Rng rng(62);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(3, 6));
    const std::size_t k = static_cast<std::size_t>(rng.integer(1, static_cast<int>(n) - 1));
    const double p = rng.pick(std::vector<double>{1.5, 2.0, 3.0, 7.0});
    const Vector x = rng.normal_vector(n);
    const Subspace y(n, rng.normal_matrix(n, k));
    for (int s = 0; s < 20; ++s) {
      const Vector a = rng.normal_vector(k), b = rng.normal_vector(k);
      const double w = rng.uniform(0, 1);
      const Vector mid = axpy(scaled(a, w), 1 - w, b);
      const double lhs = oracle::primal_objective_lp(x, y, p, mid);
      const double rhs = w * oracle::primal_objective_lp(x, y, p, a) + (1 - w) * oracle::primal_objective_lp(x, y, p, b);
      CHECK(lhs <= rhs * (1 + 1e-12) + 1e-14);
    }
    const auto rep = oracle::primal_min_lp(x, y, p);
    for (std::size_t i = 1; i < rep.trace.size(); ++i) CHECK(rep.trace[i] <= rep.trace[i - 1] * (1 + 1e-12));
    // The objective matches a direct evaluation of the residual norm.
    const Vector r = subtract(x, y.basis() * rep.minimizer);
    CHECK(rel_diff(rep.value, naive_lp_norm(r, p)) <= 1e-12);
  }
}

TEST_CASE("operator norm values") {
  const Matrix t{{1, 2}, {5, 5}};
  CHECK(rel_diff(oracle::operator_norm_value(t, DomainNorm::sup), std::sqrt(109.0)) <= 1e-14);
  CHECK(rel_diff(oracle::operator_norm_value(Matrix{{3, 0}, {0, 4}}, DomainNorm::euclidean), 4.0) <= 1e-14);
}

TEST_CASE("operator minimization examples") {
  const std::vector<MatrixOperator> eye{MatrixOperator(Matrix::identity(2))};
  const auto diag = oracle::primal_min_operator(MatrixOperator(Matrix{{2, 0}, {0, 1}}), eye);
  CHECK(rel_diff(diag.value, 0.5) <= 1e-12);
  CHECK(std::abs(diag.minimizer[0] - 1.5) <= 1e-7);

  const std::vector<MatrixOperator> a{MatrixOperator(Matrix{{1, 0}, {0, 0}}, DomainNorm::sup)};
  const auto ex = oracle::primal_min_operator(MatrixOperator(Matrix{{1, 2}, {5, 5}}, DomainNorm::sup), a);
  CHECK(rel_diff(ex.value, 10.0) <= 1e-12);
  CHECK(std::abs(ex.minimizer[0] - 3.0) <= 1e-6);

  // Two free diagonal entries leave the third.
  const std::vector<MatrixOperator> two{MatrixOperator(Matrix{{1, 0, 0}, {0, 0, 0}, {0, 0, 0}}),
                                        MatrixOperator(Matrix{{0, 0, 0}, {0, 1, 0}, {0, 0, 0}})};
  const auto d2 = oracle::primal_min_operator(MatrixOperator(Matrix{{1, 0, 0}, {0, 2, 0}, {0, 0, 3}}), two);
  CHECK(rel_diff(d2.value, 3.0) <= 1e-9);

  const std::vector<MatrixOperator> dependent{MatrixOperator(Matrix::identity(2)),
                                              MatrixOperator(2.0 * Matrix::identity(2))};
  CHECK_THROWS_AS(oracle::primal_min_operator(MatrixOperator(Matrix{{2, 0}, {0, 1}}), dependent), Error);
  CHECK_THROWS_AS(oracle::primal_min_operator(MatrixOperator(Matrix{{2, 0}, {0, 1}}), {}), Error);
}

TEST_CASE("operator minimization beats random coefficients") {
  Rng rng(63);
  for (int t = 0; t < 10; ++t) {
    const MatrixOperator tm(rng.normal_matrix(3, 3));
    const std::vector<MatrixOperator> as{MatrixOperator(rng.normal_matrix(3, 3)), MatrixOperator(rng.normal_matrix(3, 3))};
    const auto rep = oracle::primal_min_operator(tm, as);
    for (int s = 0; s < 200; ++s) {
      const Vector beta = axpy(rep.minimizer, 0.1, rng.normal_vector(2));
      CHECK(spectral_norm(combination_residual(tm, as, beta).matrix()) >= rep.value * (1 - 1e-12));
    }
  }
}

TEST_CASE("grid maximization examples") {
  oracle::GridMaxProblem circle;
  circle.dim = 2;
  circle.objective = [](std::span<const double> x) { return x[0]; };
  circle.lipschitz = 1.0;
  const auto c = oracle::grid_max_constrained(circle);
  CHECK(c.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.value <= c.upper_estimate);

  oracle::GridMaxProblem plane;
  plane.dim = 3;
  plane.objective = [](std::span<const double> x) { return x[0]; };
  plane.constraints = {Vector{1, 1, 1}};
  const auto pl = oracle::grid_max_constrained(plane);
  CHECK(pl.value == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-10));
  CHECK(std::abs(pl.maximizer[0] + pl.maximizer[1] + pl.maximizer[2]) <= 1e-12);

  oracle::GridMaxProblem cube;
  cube.dim = 2;
  cube.sphere = oracle::SphereKind::sup;
  cube.objective = [](std::span<const double> x) { return std::abs(x[0] + 0.5 * x[1]); };
  const auto cb = oracle::grid_max_constrained(cube);
  CHECK(cb.value == doctest::Approx(1.5).epsilon(1e-12));

  oracle::GridMaxProblem bad = cube;
  bad.constraints = {Vector{1, 1}};
  CHECK_THROWS_AS(oracle::grid_max_constrained(bad), Error);
  oracle::GridMaxProblem big = circle;
  big.dim = 4;
  CHECK_THROWS_AS(oracle::grid_max_constrained(big), Error);
}
