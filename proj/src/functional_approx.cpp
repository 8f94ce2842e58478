#include "bjapprox/functional_approx.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bjapprox/error.hpp"

namespace bjapprox {

const char* to_string(Route r) noexcept {
  switch (r) {
    case Route::duality_3step: return "duality-3step";
    case Route::closed_form: return "closed-form";
    case Route::classical_duality: return "classical-duality";
    case Route::primal_oracle: return "primal-oracle";
  }
  return "unknown";
}

namespace {

double sign_of(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

/// Value and gradient of c -> u.c / ||Bc||_q.
struct Ratio {
  const Matrix& basis;
  const Vector& u;
  double q;

  double value(const Vector& c) const {
    const double nx = lp_norm(basis * c, q);
    return nx == 0.0 ? 0.0 : dot(u, c) / nx;
  }

  Vector gradient(const Vector& c) const {
    const Vector x = basis * c;
    const double nx = lp_norm(x, q);
    Vector j(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) j[i] = sign_of(x[i]) * std::pow(std::abs(x[i]) / nx, q - 1.0);
    const Vector dn = transpose_times(basis, j);
    const double uc = dot(u, c);
    return scaled(axpy(scaled(u, nx), -uc, dn), 1.0 / (nx * nx));
  }
};

Vector unit(Vector c) {
  const double n = norm2(c);
  for (double& x : c) x /= n;
  return c;
}

/// Normalized gradient ascent with backtracking; c kept on the Euclidean unit
/// sphere (the ratio is invariant under positive scaling).
Vector ascend(const Ratio& ratio, Vector c, int max_iterations) {
  c = unit(std::move(c));
  double value = ratio.value(c);
  double step = 1.0;
  for (int it = 0; it < max_iterations; ++it) {
    const Vector g = ratio.gradient(c);
    const double gn = norm2(g);
    if (gn == 0.0) break;
    bool improved = false;
    double new_value = value;
    Vector trial;
    for (int ls = 0; ls < 60; ++ls, step *= 0.5) {
      trial = unit(axpy(c, step / gn, g));
      new_value = ratio.value(trial);
      if (new_value > value) {
        improved = true;
        break;
      }
    }
    if (!improved) break;
    const double change = (new_value - value) / std::max(std::abs(new_value), 1e-300);
    c = std::move(trial);
    value = new_value;
    step = std::min(2.0 * step, 1.0);
    if (change < 1e-12) break;
  }
  return c;
}

/// Newton's method on min (1/q) sum (x_i^2 + eps^2)^(q/2), x = Bc, subject to
/// u.c = 1, started from a feasible c.
Vector newton_polish(const Matrix& basis, const Vector& u, double q, Vector c) {
  const std::size_t d = c.size();
  double xscale = 0.0;
  for (double xi : basis * c) xscale = std::max(xscale, std::abs(xi));
  const double eps = 1e-12 * xscale;
  auto psi = [&](const Vector& cc) {
    double s = 0.0;
    for (double xi : basis * cc) s += std::pow(xi * xi + eps * eps, 0.5 * q);
    return s / q;
  };
  double f = psi(c);
  for (int it = 0; it < 100; ++it) {
    const Vector x = basis * c;
    Vector w1(x.size()), w2(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double s = x[i] * x[i] + eps * eps;
      w1[i] = x[i] * std::pow(s, 0.5 * q - 1.0);
      w2[i] = std::pow(s, 0.5 * q - 2.0) * ((q - 1.0) * x[i] * x[i] + eps * eps);
    }
    const Vector g = transpose_times(basis, w1);
    Matrix kkt(d + 1, d + 1);
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = 0; b < d; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += basis(i, a) * w2[i] * basis(i, b);
        kkt(a, b) = s;
      }
      kkt(a, d) = kkt(d, a) = u[a];
    }
    Vector rhs(d + 1, 0.0);
    for (std::size_t a = 0; a < d; ++a) rhs[a] = -g[a];
    const Vector sol = least_squares(kkt, rhs, 1e-15);
    Vector step(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(d));
    const double slope = dot(step, g);
    if (!(slope < 0.0)) break;
    double t = 1.0;
    bool progressed = false;
    for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
      const Vector trial = axpy(c, t, step);
      const double ft = psi(trial);
      if (ft <= f + 1e-4 * t * slope) {
        progressed = ft < f;
        c = trial;
        f = ft;
        break;
      }
    }
    if (!progressed) break;
  }
  return c;
}

void require_compatible(const Functional& f, const Functional& g) {
  if (f.size() != g.size() || f.exponent() != g.exponent()) {
    throw Error(ErrorCode::dimension_mismatch, "functionals on different spaces");
  }
}

Matrix columns_of(std::span<const Functional> gs, std::size_t n) {
  Matrix m(n, gs.size());
  for (std::size_t j = 0; j < gs.size(); ++j) m.set_column(j, gs[j].coeffs());
  return m;
}

}  // namespace

SphereMax max_on_sphere_subspace(const Functional& f, const Subspace& w, const SphereMaxOptions& options) {
  if (w.ambient_dim() != f.size()) throw Error(ErrorCode::dimension_mismatch, "functional and subspace dimensions");
  if (w.is_zero()) throw Error(ErrorCode::degenerate_subspace, "maximization over the zero subspace");
  const double q = f.exponent().q;
  const Matrix& basis = w.basis();
  const std::size_t d = w.rank();
  const Vector u = transpose_times(basis, f.coeffs());

  auto finish = [&](const Vector& c) {
    Vector x = basis * c;
    const double nx = lp_norm(x, q);
    x = scaled(x, 1.0 / nx);
    double value = f.apply(x);
    if (value < 0) {
      x = scaled(x, -1.0);
      value = -value;
    }
    return SphereMax{value, LpVector(std::move(x), f.exponent().dual())};
  };

  double ucol = 0.0;
  for (std::size_t j = 0; j < d; ++j) ucol = std::max(ucol, norm2(basis.column(j)));
  if (norm2(u) <= 1e-15 * norm2(f.coeffs()) * ucol) {
    // f vanishes on W.
    Vector c(d, 0.0);
    c[0] = 1.0;
    auto out = finish(c);
    out.value = 0.0;
    return out;
  }

  const Ratio ratio{basis, u, q};
  std::vector<Vector> starts;
  starts.push_back(least_squares(basis.transpose() * basis, u));  // Euclidean maximizer
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int r = 0; r < options.restarts; ++r) {
    Vector c(d);
    for (double& x : c) x = normal(rng);
    if (dot(c, u) < 0) c = scaled(c, -1.0);
    starts.push_back(std::move(c));
  }

  Vector best;
  double best_value = -1.0;
  for (auto& s : starts) {
    if (norm2(s) == 0.0) continue;
    Vector c = ascend(ratio, s, options.max_iterations);
    const double v = ratio.value(c);
    if (v > best_value) {
      best_value = v;
      best = std::move(c);
    }
  }

  Vector polished = newton_polish(basis, u, q, scaled(best, 1.0 / dot(u, best)));
  if (ratio.value(polished) >= best_value * (1.0 - 1e-12)) best = std::move(polished);
  return finish(best);
}

ApproxResult best_approx_functional(const Functional& f0, std::span<const Functional> gs,
                                    const SphereMaxOptions& options) {
  const std::size_t n = f0.size();
  for (const auto& g : gs) require_compatible(f0, g);
  const Matrix gcols = columns_of(gs, n);
  if (!gs.empty() && numerical_rank(gcols) != gs.size()) {
    throw Error(ErrorCode::rank_deficient, "approximating functionals are linearly dependent");
  }

  ApproxResult out;
  out.route = Route::duality_3step;
  const double norm_f0 = f0.norm();
  auto exact_expansion = [&] {
    out.distance = 0.0;
    out.coefficients = gs.empty() ? Vector{} : least_squares(gcols, f0.coeffs());
    return out;
  };
  if (norm_f0 == 0.0) return exact_expansion();

  // Step A: common kernel of the g_i.
  const Subspace w = nullspace_intersection(gs, n);
  if (w.is_zero()) return exact_expansion();

  // Step B: maximize |f0| over the unit sphere of W.
  const SphereMax sm = max_on_sphere_subspace(f0, w, options);
  if (sm.value < 1e-10 * norm_f0) return exact_expansion();

  // Step C: the residual is the scaled duality map of h0. Coordinates where
  // h0 is tiny carry no usable information once p > 2 (the inverse power
  // amplifies rounding), so alpha is fitted on the well-determined ones and
  // xi0 is then recomputed as f0 - sum alpha_i g_i.
  const Functional j = duality_map(sm.maximizer);
  const Vector rhs = subtract(f0.coeffs(), scaled(j.coeffs(), sm.value));
  double hmax = 0.0;
  for (double h : sm.maximizer.coords()) hmax = std::max(hmax, std::abs(h));
  std::vector<std::size_t> rows;
  for (double tau : {1e-3, 1e-6, 0.0}) {
    if (gs.empty()) break;
    rows.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (tau == 0.0 || std::abs(sm.maximizer.coords()[i]) > tau * hmax) rows.push_back(i);
    Matrix sub(rows.size(), gs.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < gs.size(); ++c) sub(r, c) = gcols(rows[r], c);
    if (numerical_rank(sub) == gs.size() || tau == 0.0) {
      Vector sub_rhs(rows.size());
      for (std::size_t r = 0; r < rows.size(); ++r) sub_rhs[r] = rhs[rows[r]];
      out.coefficients = least_squares(sub, sub_rhs);
      const Vector fitted = sub * out.coefficients;
      const double residual = lp_norm(subtract(fitted, sub_rhs), f0.exponent().p);
      if (residual > 1e-7 * norm_f0) {
        throw Error(ErrorCode::internal_inconsistency,
                    "f0 - xi0 is not in the span of the g_i (residual " + std::to_string(residual / norm_f0) + ")");
      }
      break;
    }
  }
  const Vector xi0 = gs.empty() ? f0.values() : subtract(f0.coeffs(), gcols * out.coefficients);
  if (std::abs(lp_norm(xi0, f0.exponent().p) - sm.value) > 1e-7 * norm_f0) {
    throw Error(ErrorCode::internal_inconsistency, "||f0 - sum alpha_i g_i|| differs from the dual maximum");
  }
  out.distance = sm.value;
  out.attainment_point = sm.maximizer;
  out.residual_functional = Functional(xi0, f0.exponent());
  return out;
}

ApproxResult dist_point_subspace_lp(const LpVector& x, const Subspace& y, const SphereMaxOptions& options) {
  if (x.size() != y.ambient_dim()) throw Error(ErrorCode::dimension_mismatch, "point and subspace dimensions");
  std::vector<Functional> gs;
  gs.reserve(y.rank());
  for (std::size_t j = 0; j < y.rank(); ++j) gs.emplace_back(y.basis().column(j), x.exponent());
  return best_approx_functional(omega(x), gs, options);
}

double codim1_closed_form_2d(double a, double b, double c, double d, double p) {
  const Exponent e = conjugate_exponent(p);
  if (c == 0.0 && d == 0.0) throw Error(ErrorCode::degenerate_subspace, "(c, d) = (0, 0) spans no line");
  return std::abs(a * d - b * c) / lp_norm(Vector{c, d}, e.q);
}

RemarkInequality verify_remark_inequality(double a, double b, double c, double alpha, double beta, double p) {
  conjugate_exponent(p);
  RemarkInequality r;
  r.lhs = std::pow(std::abs(a - alpha - beta), p) + std::pow(std::abs(b - 2.0 * beta), p) +
          std::pow(std::abs(c + alpha - beta), p);
  r.rhs = std::pow(3.0, 1.0 - p) * std::pow(std::abs(a - b + c), p);
  r.holds = r.lhs >= r.rhs - 1e-12 * std::max(r.lhs, r.rhs);
  return r;
}

double classical_duality_eval(const LpVector& x, const Subspace& y, const SphereMaxOptions& options) {
  if (x.size() != y.ambient_dim()) throw Error(ErrorCode::dimension_mismatch, "point and subspace dimensions");
  const Matrix annihilator = orthogonal_complement(y.basis());
  if (annihilator.cols() == 0) return 0.0;
  const Subspace yperp(x.size(), annihilator);
  // x acts on the annihilator, whose elements are measured in l_q.
  SphereMaxOptions opts = options;
  opts.seed = options.seed ^ 0x9e3779b97f4a7c15ULL;
  return max_on_sphere_subspace(omega(x), yperp, opts).value;
}

CertificateCheck check_best_approx_certificate_functional(const Functional& f, std::span<const Functional> gs,
                                                          std::span<const double> alpha, double tol) {
  if (alpha.size() != gs.size()) throw Error(ErrorCode::dimension_mismatch, "coefficient count differs from functionals");
  Vector r(f.coeffs().begin(), f.coeffs().end());
  double scale = f.norm();
  for (std::size_t i = 0; i < gs.size(); ++i) {
    require_compatible(f, gs[i]);
    r = axpy(r, -alpha[i], gs[i].coeffs());
    scale += std::abs(alpha[i]) * gs[i].norm();
  }
  const Functional residual(std::move(r), f.exponent());
  CertificateCheck out;
  if (residual.norm() <= 1e-12 * scale) {
    out.valid = true;
    return out;
  }
  const LpVector xhat = norm_attainment_point(residual);
  for (const auto& g : gs) {
    const double ng = g.norm();
    if (ng > 0.0) out.worst_violation = std::max(out.worst_violation, std::abs(g(xhat)) / ng);
  }
  out.valid = out.worst_violation <= tol;
  out.witness = xhat;
  return out;
}

}  // namespace bjapprox
