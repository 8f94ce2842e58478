#pragma once

// Best approximation out of subspaces of l_p^n through the dual space.
//
// A point x of l_p^n is identified with the functional omega(x) on l_q^n.
// The distance from f to span{g_1..g_k} equals the maximum of |f| over the
// unit sphere of the common kernel W of the g_i; the maximizer h0 is unique up
// to sign and the residual f - sum alpha_i g_i is the scaled duality map of h0,
// which turns the coefficients into the solution of a linear system.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bjapprox/lp_core.hpp"

namespace bjapprox {

enum class Route { duality_3step, closed_form, classical_duality, primal_oracle };
const char* to_string(Route r) noexcept;

struct ApproxResult {
  double distance = 0.0;
  Vector coefficients;                           // alpha
  std::optional<LpVector> attainment_point;      // h0, unit in l_q; absent when distance = 0
  std::optional<Functional> residual_functional; // xi0 = f0 - sum alpha_i g_i
  Route route = Route::duality_3step;
};

struct SphereMax {
  double value = 0.0;
  LpVector maximizer;  // h0, sign-normalized so f(h0) >= 0
};

struct SphereMaxOptions {
  std::uint64_t seed = 42;
  int restarts = 8;
  int max_iterations = 10000;
};

/// max{|f(x)| : x in W, ||x||_q = 1}. Normalized gradient ascent on the ratio
/// f(Bc) / ||Bc||_q from the Euclidean warm start and seeded restarts,
/// followed by a Newton polish of the equivalent convex problem
/// min ||Bc||_q subject to f(Bc) = 1.
SphereMax max_on_sphere_subspace(const Functional& f, const Subspace& w, const SphereMaxOptions& options = {});

/// Three-step duality algorithm: kernel intersection, sphere maximization,
/// linear solve sum alpha_i g_i = f0 - xi0 with a residual self-check.
ApproxResult best_approx_functional(const Functional& f0, std::span<const Functional> gs,
                                    const SphereMaxOptions& options = {});

/// Distance from x to Y in l_p^n via omega and best_approx_functional. The
/// best approximation is basis * coefficients.
ApproxResult dist_point_subspace_lp(const LpVector& x, const Subspace& y, const SphereMaxOptions& options = {});

/// |ad - bc| / (|c|^q + |d|^q)^(1/q): distance from (a, b) to span{(c, d)} in l_p^2.
double codim1_closed_form_2d(double a, double b, double c, double d, double p);

struct RemarkInequality {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// |a-alpha-beta|^p + |b-2beta|^p + |c+alpha-beta|^p  >=  3^(1-p) |a-b+c|^p.
RemarkInequality verify_remark_inequality(double a, double b, double c, double alpha, double beta, double p);

/// sup{f(x) : ||f||_q <= 1, f = 0 on Y}: the annihilator of Y is built by
/// Householder QR and the supremum is taken over its unit sphere.
double classical_duality_eval(const LpVector& x, const Subspace& y, const SphereMaxOptions& options = {});

struct CertificateCheck {
  bool valid = false;
  std::optional<LpVector> witness;  // norm-attainment point of f - sum alpha_i g_i
  double worst_violation = 0.0;     // max_k |g_k(x)| / ||g_k||
};

/// sum alpha_i g_i is the best approximation iff the norm-attainment point of
/// f - sum alpha_i g_i lies in every kernel N(g_k).
CertificateCheck check_best_approx_certificate_functional(const Functional& f, std::span<const Functional> gs,
                                                          std::span<const double> alpha, double tol = 1e-7);

}  // namespace bjapprox
