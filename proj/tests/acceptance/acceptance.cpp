// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "bjapprox/functional_approx.hpp"
#include "bjapprox/operator_approx.hpp"
#include "bjapprox/oracle.hpp"
#include "bjapprox/orthogonality.hpp"
#include "support/test_support.hpp"

using namespace bjapprox;
using testing_support::rel_diff;
using testing_support::Rng;
using testing_support::scan_minimize;

namespace {

int failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  if (!ok) ++failures;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const Matrix kT{{1, 2}, {5, 5}};
const Matrix kA{{1, 0}, {0, 0}};

MatrixOperator sup(const Matrix& m) { return MatrixOperator(m, DomainNorm::sup); }

void worked_operator_example() {
  const double norm_t = operator_norm(sup(kT)).norm;
  // lambda_1 balances ||B(1,1)|| and ||B(1,-1)|| for B = T - lambda A.
  auto gap = [](double l) {
    const Matrix b = kT - l * kA;
    return norm2(b * Vector{1, 1}) - norm2(b * Vector{1, -1});
  };
  double lo = 0, hi = 100;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (gap(lo) * gap(mid) <= 0 ? hi : lo) = mid;
  }
  const double lambda1 = 0.5 * (lo + hi);
  const double norm1 = operator_norm(sup(kT - lambda1 * kA)).norm;
  const double d1 = best_approx_operator_1d(sup(kT), sup(kA)).dist;
  const double d2 = dist_formula_smooth_codomain(sup(kT), sup(kA)).value;
  const double e0 = rel_diff(norm_t, std::sqrt(109.0)), e1 = rel_diff(lambda1, 13.5), e2 = rel_diff(norm1, 14.5);
  const double e3 = rel_diff(d1, 10.0), e4 = rel_diff(d2, 10.0);
  report(1, "sup-domain operator example", e0 <= 1e-10 && e1 <= 1e-10 && e2 <= 1e-10 && e3 <= 1e-8 && e4 <= 1e-6,
         "||T|| err " + fmt("%.1e", e0) + ", lambda1 err " + fmt("%.1e", e1) + ", ||T-lambda1 A|| err " + fmt("%.1e", e2) +
             ", dist err " + fmt("%.1e", e3) + " / " + fmt("%.1e", e4));
}

void closed_form_vs_oracle() {
  Rng rng(1001);
  double worst = 0;
  const std::vector<double> ps{1.5, 2, 3, 7};
  for (int t = 0; t < 200; ++t) {
    const double p = ps[static_cast<std::size_t>(t % 4)];
    const double a = rng.normal(), b = rng.normal(), c = rng.normal(), d = rng.normal();
    const double closed = codim1_closed_form_2d(a, b, c, d, p);
    const double primal = oracle::primal_min_lp(Vector{a, b}, Subspace(2, Matrix{{c}, {d}}), p).value;
    worst = std::max(worst, rel_diff(closed, primal));
  }
  report(2, "two-dimensional closed form vs primal oracle, 200 instances", worst <= 1e-6,
         "max rel diff " + fmt("%.2e", worst));
}

const Subspace& worked_subspace() {
  static const Subspace y(3, Matrix{{1, 1}, {0, 2}, {-1, 1}});
  return y;
}

void worked_functional_example() {
  Rng rng(1002);
  double worst = 0;
  for (double p : {1.5, 2.0, 3.0}) {
    const Exponent e = conjugate_exponent(p);
    for (int t = 0; t < 50; ++t) {
      const double a = rng.normal(), b = rng.normal(), c = rng.normal();
      const double expected = std::pow(3.0, -1.0 / e.q) * std::abs(a - b + c);
      const LpVector x({a, b, c}, e);
      worst = std::max(worst, rel_diff(dist_point_subspace_lp(x, worked_subspace()).distance, expected));
      worst = std::max(worst, rel_diff(classical_duality_eval(x, worked_subspace()), expected));
      worst = std::max(worst, rel_diff(oracle::primal_min_lp(x.values(), worked_subspace(), p).value, expected));
    }
  }
  report(3, "three-dimensional example, three routes, 150 instances", worst <= 1e-6,
         "max rel diff " + fmt("%.2e", worst));
}

void remark_inequality() {
  Rng rng(1003);
  int violations = 0;
  for (int t = 0; t < 10000; ++t) {
    const double p = rng.uniform(1.05, 8.0);
    const auto r = verify_remark_inequality(rng.normal(), rng.normal(), rng.normal(), 2 * rng.normal(), 2 * rng.normal(), p);
    violations += !r.holds;
  }
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    const double p = rng.uniform(1.1, 7.0);
    const double a = rng.normal(), b = rng.normal(), c = rng.normal();
    const double inf = oracle::primal_min_lp(Vector{a, b, c}, worked_subspace(), p).value;
    worst = std::max(worst, rel_diff(inf, std::pow(3.0, (1 - p) / p) * std::abs(a - b + c)));
  }
  report(4, "inequality holds on 10^4 draws and its bound is the infimum", violations == 0 && worst <= 1e-6,
         std::to_string(violations) + " violations, infimum max rel diff " + fmt("%.2e", worst));
}

void three_route_agreement() {
  Rng rng(1004);
  double worst = 0;
  const std::vector<double> ps{1.5, 2, 3, 7};
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(2, 6));
    const std::size_t k = static_cast<std::size_t>(rng.integer(1, static_cast<int>(n) - 1));
    const double p = rng.pick(ps);
    const Vector xv = rng.normal_vector(n);
    const Subspace y(n, rng.normal_matrix(n, k));
    const LpVector x(xv, conjugate_exponent(p));
    const double d[3] = {dist_point_subspace_lp(x, y).distance, classical_duality_eval(x, y),
                         oracle::primal_min_lp(xv, y, p).value};
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) worst = std::max(worst, rel_diff(d[i], d[j]));
  }
  report(5, "duality, classical duality and primal oracle agree, 300 instances", worst <= 1e-6,
         "max pairwise rel diff " + fmt("%.2e", worst));
}

void hilbert_operators() {
  Rng rng(1005);
  double worst = 0;
  int condition_failures = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = t % 2 ? 3 : 2;
    const Matrix tm = rng.normal_matrix(n, n), am = rng.normal_matrix(n, n);
    const MatrixOperator to(tm), ao(am);
    const double bound = 2 * spectral_norm(tm) / spectral_norm(am) + 1;
    const auto scan = scan_minimize([&](double l) { return spectral_norm(tm - l * am); }, -bound, bound, 4001);
    worst = std::max(worst, rel_diff(dist_formula_hilbert(to, ao), scan.value));
    const double lambda0 = best_approx_operator_1d(to, ao).lambda0;
    const double shift = 0.05 * spectral_norm(tm) / spectral_norm(am);
    condition_failures += !hilbert_lambda_condition(to, ao, lambda0, 1e-6).valid;
    condition_failures += hilbert_lambda_condition(to, ao, lambda0 + shift, 1e-6).valid;
    condition_failures += hilbert_lambda_condition(to, ao, lambda0 - shift, 1e-6).valid;
  }
  report(6, "Euclidean operators: constrained-max distance and the lambda condition, 100 pairs",
         worst <= 1e-4 && condition_failures == 0,
         "max rel diff " + fmt("%.2e", worst) + ", " + std::to_string(condition_failures) + " condition mismatches");
}

Vector orthogonal_partner(Rng& rng, const LpVector& x) {
  const Vector r = rng.normal_vector(x.size());
  Vector j(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) j[i] = std::copysign(std::pow(std::abs(x.coords()[i]), x.space_p() - 1), x.coords()[i]);
  return axpy(r, -dot(r, j) / dot(x.coords(), j), x.coords());
}

void property_suites() {
  Rng rng(1006);
  const std::vector<double> ps{1.5, 2, 3, 7};
  int sip_failures = 0;
  for (double p : ps) {
    const Exponent e = conjugate_exponent(p);
    for (int t = 0; t < 1000; ++t) {
      const std::size_t n = static_cast<std::size_t>(rng.integer(1, 5));
      const Vector xv = rng.normal_vector(n), yv = rng.normal_vector(n), zv = rng.normal_vector(n);
      const LpVector x(xv, e), y(yv, e), z(zv, e);
      const double s = rng.normal();
      const double xz = sip(x, z), yz = sip(y, z), xx = sip(x, x), zz = sip(z, z);
      const double scale = lp_norm(x) * lp_norm(z) + lp_norm(y) * lp_norm(z);
      bool ok = std::abs(sip(LpVector(axpy(xv, 1, yv), e), z) - (xz + yz)) <= 1e-12 * scale;  // additivity
      ok = ok && std::abs(sip(LpVector(scaled(xv, s), e), z) - s * xz) <= 1e-12 * std::abs(s) * scale;
      ok = ok && xx > 0 && std::abs(xx - lp_norm(x) * lp_norm(x)) <= 1e-12 * xx;  // definiteness, compatibility
      ok = ok && xz * xz <= xx * zz * (1 + 1e-12);                                 // Cauchy-Schwarz
      ok = ok && std::abs(sip(x, LpVector(scaled(zv, s), e)) - s * xz) <= 1e-12 * std::abs(s) * scale;
      sip_failures += !ok;
    }
  }

  int homogeneity_failures = 0;
  for (int t = 0; t < 1000; ++t) {
    const double p = rng.pick(ps);
    const Exponent e = conjugate_exponent(p);
    const LpVector x(rng.normal_vector(3), e);
    const LpVector y(orthogonal_partner(rng, x), e);
    const double a = rng.nonzero_scalar(), b = rng.nonzero_scalar();
    const bool base = bj_orthogonal_vectors(x, y).is_orthogonal;
    const bool moved = bj_orthogonal_vectors(LpVector(scaled(x.coords(), a), e), LpVector(scaled(y.coords(), b), e)).is_orthogonal;
    homogeneity_failures += !(base && moved);
  }

  int uniqueness_failures = 0;
  for (int t = 0; t < 500; ++t) {
    const double p = rng.pick(ps);
    const Exponent e = conjugate_exponent(p);
    const Functional f(rng.normal_vector(static_cast<std::size_t>(rng.integer(2, 5))), e);
    const LpVector xh = norm_attainment_point(f);
    bool ok = rel_diff(f(xh), f.norm()) <= 1e-12 && rel_diff(lp_norm(xh), 1.0) <= 1e-12;
    // Any other unit vector falls strictly short of the norm.
    for (int k = 0; k < 10 && ok; ++k) {
      Vector z = axpy(xh.coords(), 1e-2, rng.normal_vector(f.size()));
      z = scaled(z, 1.0 / lp_norm(z, e.q));
      ok = f.apply(z) < f.norm();
    }
    uniqueness_failures += !ok;
  }

  double basis_worst = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(2, 6));
    const std::size_t d = static_cast<std::size_t>(rng.integer(1, static_cast<int>(n)));
    const Functional f(rng.normal_vector(n), conjugate_exponent(rng.pick(ps)));
    const Matrix b = rng.normal_matrix(n, d);
    const Matrix mix = rng.normal_matrix(d, d) + 3.0 * Matrix::identity(d);
    if (numerical_rank(mix) < d) continue;
    basis_worst = std::max(basis_worst, rel_diff(max_on_sphere_subspace(f, Subspace(n, b)).value,
                                                 max_on_sphere_subspace(f, Subspace(n, b * mix)).value));
  }
  report(7, "property suites: s.i.p. axioms, homogeneity, uniqueness, basis independence",
         sip_failures == 0 && homogeneity_failures == 0 && uniqueness_failures == 0 && basis_worst <= 1e-9,
         std::to_string(sip_failures) + "/4000 s.i.p., " + std::to_string(homogeneity_failures) + "/1000 homogeneity, " +
             std::to_string(uniqueness_failures) + "/500 uniqueness failures, basis max rel diff " + fmt("%.1e", basis_worst));
}

void attainment_patterns() {
  const auto set = norm_attainment_set(sup(kT - 13.5 * kA));
  std::vector<Vector> got = set.patterns;
  std::vector<Vector> want{{1, 1}, {-1, -1}, {1, -1}, {-1, 1}};
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  report(8, "attainment set of T - 13.5 A is four patterns, not of +-D form",
         got == want && set.kind == AttainmentKind::sign_pattern_list && !set.is_pm_connected,
         std::to_string(got.size()) + " patterns, pm_connected=" + (set.is_pm_connected ? "true" : "false"));
}

}  // namespace

int main() {
  worked_operator_example();
  closed_form_vs_oracle();
  worked_functional_example();
  remark_inequality();
  three_route_agreement();
  hilbert_operators();
  property_suites();
  attainment_patterns();
  std::printf("%s: %d of 8 criteria failed\n", failures ? "FAILED" : "PASSED", failures);
  return failures ? 1 : 0;
}
