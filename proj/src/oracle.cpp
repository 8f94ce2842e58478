#include "bjapprox/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "bjapprox/error.hpp"
#include "bjapprox/scalar_min.hpp"

namespace bjapprox::oracle {

namespace {

constexpr int kMaxLpIterations = 100000;

struct SmoothedLp {
  double p;
  double eps;

  double value(std::span<const double> r) const {
    double s = 0.0;
    for (double ri : r) s += std::pow(ri * ri + eps * eps, 0.5 * p);
    return s;
  }
};

double sign_of(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

/// Gradient of alpha -> ||x - B alpha||_p (unsmoothed); zero when r = 0.
Vector norm_gradient(const Matrix& basis, std::span<const double> r, double p) {
  const double nr = lp_norm(r, p);
  Vector j(r.size(), 0.0);
  if (nr == 0.0) return Vector(basis.cols(), 0.0);
  for (std::size_t i = 0; i < r.size(); ++i) j[i] = sign_of(r[i]) * std::pow(std::abs(r[i]) / nr, p - 1.0);
  return scaled(transpose_times(basis, j), -1.0);
}

}  // namespace

double primal_objective_lp(std::span<const double> x, const Subspace& y, double p, std::span<const double> alpha) {
  return lp_norm(subtract(x, y.basis() * alpha), p);
}

OracleReport primal_min_lp(std::span<const double> x_in, const Subspace& y, double p) {
  conjugate_exponent(p);  // validates p
  if (x_in.size() != y.ambient_dim()) throw Error(ErrorCode::dimension_mismatch, "point and subspace dimensions");
  const Matrix& basis = y.basis();
  const std::size_t k = y.rank();

  OracleReport rep;
  double scale = 0.0;
  for (double xi : x_in) scale = std::max(scale, std::abs(xi));
  if (k == 0 || scale == 0.0) {
    rep.minimizer = Vector(k, 0.0);
    rep.value = lp_norm(x_in, p);
    rep.converged = true;
    return rep;
  }
  const Vector x = scaled(x_in, 1.0 / scale);

  const SmoothedLp phi{p, 1e-12};
  Vector alpha = least_squares(basis, x);
  auto residual = [&](const Vector& a) { return subtract(x, basis * a); };
  Vector r = residual(alpha);
  double f = phi.value(r);

  for (; rep.iterations < kMaxLpIterations; ++rep.iterations) {
    const double nr = lp_norm(r, p);
    rep.stationarity = norm2(norm_gradient(basis, r, p));
    if (nr <= 1e-14 || rep.stationarity <= 1e-13 * (1.0 + nr)) break;

    Vector w1(r.size()), w2(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double s = r[i] * r[i] + phi.eps * phi.eps;
      w1[i] = p * r[i] * std::pow(s, 0.5 * p - 1.0);
      w2[i] = p * std::pow(s, 0.5 * p - 2.0) * ((p - 1.0) * r[i] * r[i] + phi.eps * phi.eps);
    }
    const Vector grad = scaled(transpose_times(basis, w1), -1.0);
    Matrix h(k, k);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) s += basis(i, a) * w2[i] * basis(i, b);
        h(a, b) = s;
      }
    // Newton direction when it is a descent direction, steepest descent otherwise.
    Vector dir = scaled(least_squares(h, grad, 1e-14), -1.0);
    double slope = dot(dir, grad);
    if (!(slope < 0.0)) {
      dir = scaled(grad, -1.0);
      slope = dot(dir, grad);
    }

    double t = 1.0;
    bool progressed = false;
    for (int ls = 0; ls < 80; ++ls, t *= 0.5) {
      const Vector trial = axpy(alpha, t, dir);
      const Vector rt = residual(trial);
      const double ft = phi.value(rt);
      if (ft <= f + 1e-4 * t * slope) {
        progressed = ft < f;
        alpha = trial;
        r = rt;
        f = ft;
        break;
      }
    }
    rep.trace.push_back(scale * std::pow(f, 1.0 / p));
    if (!progressed) break;  // no decrease representable in double precision
  }
  {
    const double nr = lp_norm(r, p);
    rep.stationarity = norm2(norm_gradient(basis, r, p));
    rep.converged = nr <= 1e-14 || rep.stationarity <= 1e-9 * (1.0 + nr);
  }
  rep.minimizer = scaled(alpha, scale);
  rep.value = scale * lp_norm(r, p);
  return rep;
}

OracleReport primal_min_lp(const LpVector& x, const Subspace& y) { return primal_min_lp(x.coords(), y, x.space_p()); }

double operator_norm_value(const Matrix& b, DomainNorm domain) {
  if (domain == DomainNorm::euclidean) return spectral_norm(b);
  const std::size_t n = b.cols();
  if (n > 20) throw Error(ErrorCode::capacity, "sup-domain norm limited to 20 columns");
  double best = 0.0;
  Vector s(n);
  const std::uint64_t count = std::uint64_t{1} << (n - 1);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    s[0] = 1.0;
    for (std::size_t i = 1; i < n; ++i) s[i] = (mask >> (i - 1)) & 1 ? -1.0 : 1.0;
    best = std::max(best, norm2(b * s));
  }
  return best;
}

namespace {

Matrix residual_matrix(const MatrixOperator& t, std::span<const MatrixOperator> as, std::span<const double> beta) {
  Matrix m = t.matrix();
  for (std::size_t i = 0; i < as.size(); ++i) m = m - beta[i] * as[i].matrix();
  return m;
}

/// One subgradient of beta -> ||T - sum beta_i A_i|| at beta.
Vector operator_subgradient(const Matrix& b, std::span<const MatrixOperator> as, DomainNorm domain) {
  Vector x;
  if (domain == DomainNorm::euclidean) {
    const auto eig = symmetric_eigen(b.transpose() * b);
    x = eig.vectors.column(0);
  } else {
    const std::size_t n = b.cols();
    double best = -1.0;
    Vector s(n);
    const std::uint64_t count = std::uint64_t{1} << (n - 1);
    for (std::uint64_t mask = 0; mask < count; ++mask) {
      s[0] = 1.0;
      for (std::size_t i = 1; i < n; ++i) s[i] = (mask >> (i - 1)) & 1 ? -1.0 : 1.0;
      const double v = norm2(b * s);
      if (v > best) {
        best = v;
        x = s;
      }
    }
  }
  const Vector bx = b * x;
  const double nb = norm2(bx);
  Vector g(as.size(), 0.0);
  if (nb == 0.0) return g;
  for (std::size_t i = 0; i < as.size(); ++i) g[i] = -dot(as[i].apply(x), bx) / nb;
  return g;
}

/// Minimizes f over the box by golden section on each coordinate, with the
/// remaining coordinates minimized out (partial minimization keeps convexity).
double nested_golden(const std::function<double(const Vector&)>& f, Vector& beta, std::size_t level,
                     const Vector& lo, const Vector& hi, double rel_width, double& width_out) {
  if (level == beta.size()) return f(beta);
  auto inner = [&](double t) {
    beta[level] = t;
    double unused = 0.0;
    return nested_golden(f, beta, level + 1, lo, hi, rel_width, unused);
  };
  const auto best = golden_section_minimize(inner, lo[level], hi[level], rel_width);
  width_out = std::max(width_out, best.hi - best.lo);
  beta[level] = best.argmin;
  return nested_golden(f, beta, level + 1, lo, hi, rel_width, width_out);
}

}  // namespace

OracleReport primal_min_operator(const MatrixOperator& t, std::span<const MatrixOperator> as, std::uint64_t seed) {
  if (as.empty()) throw Error(ErrorCode::invalid_input, "no operators to approximate with");
  for (const auto& a : as)
    if (!t.compatible_with(a)) throw Error(ErrorCode::dimension_mismatch, "operators of different shape or norm");
  const DomainNorm domain = t.domain_norm();
  const std::size_t k = as.size();

  auto objective = [&](const Vector& beta) { return operator_norm_value(residual_matrix(t, as, beta), domain); };

  // Frobenius Gram matrix of the A_i; its smallest eigenvalue bounds how far a
  // minimizer can be from the origin.
  Matrix gram(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) gram(i, j) = dot(as[i].matrix().data(), as[j].matrix().data());
  const auto geig = symmetric_eigen(gram);
  if (geig.values.back() <= 1e-20 * std::max(geig.values.front(), 1e-300)) {
    throw Error(ErrorCode::rank_deficient, "approximating operators are linearly dependent");
  }
  const double norm_t = objective(Vector(k, 0.0));
  const double shape = std::sqrt(static_cast<double>(std::min(t.rows(), t.cols())));
  const double radius = 2.0 * norm_t * shape / std::sqrt(geig.values.back()) + 1e-12;

  OracleReport rep;
  if (norm_t == 0.0) {
    rep.minimizer = Vector(k, 0.0);
    rep.converged = true;
    return rep;
  }

  if (k == 1) {
    const auto best = golden_section_minimize([&](double b) { return objective(Vector{b}); }, -radius, radius, 1e-13);
    rep.minimizer = {best.argmin};
    rep.value = best.value;
    rep.iterations = best.iterations;
    rep.stationarity = best.hi - best.lo;
    rep.converged = true;
    return rep;
  }

  // Subgradient phase from the Frobenius least-squares start and seeded
  // perturbations of it; best iterate tracked.
  Matrix stack(t.rows() * t.cols(), k);
  for (std::size_t i = 0; i < k; ++i) stack.set_column(i, as[i].matrix().data());
  const Vector start = least_squares(stack, t.matrix().data());
  double max_a = 0.0;
  for (const auto& a : as) max_a = std::max(max_a, operator_norm_value(a.matrix(), domain));
  const double step0 = 0.1 * norm_t / max_a;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector best_beta = start;
  double best_value = objective(start);
  constexpr int kStarts = 3;
  constexpr int kSubgradientIterations = 10000;
  for (int s = 0; s < kStarts; ++s) {
    Vector beta = start;
    if (s > 0)
      for (double& b : beta) b += step0 * normal(rng);
    for (int it = 1; it <= kSubgradientIterations / kStarts; ++it) {
      const Matrix b = residual_matrix(t, as, beta);
      const double v = operator_norm_value(b, domain);
      if (v < best_value) {
        best_value = v;
        best_beta = beta;
      }
      Vector g = operator_subgradient(b, as, domain);
      const double gn = norm2(g);
      if (gn == 0.0) break;
      beta = axpy(beta, -step0 / std::sqrt(static_cast<double>(it)) / gn, g);
      ++rep.iterations;
    }
  }
  rep.trace.push_back(best_value);

  if (k <= 3) {
    Vector lo(k, -radius), hi(k, radius);
    Vector beta(k, 0.0);
    double width = 0.0;
    const double v = nested_golden(objective, beta, 0, lo, hi, 1e-13, width);
    rep.stationarity = width;
    if (v <= best_value) {
      best_value = v;
      best_beta = beta;
    }
    rep.converged = true;
    rep.trace.push_back(best_value);
  }
  rep.minimizer = best_beta;
  rep.value = best_value;
  return rep;
}

namespace {

struct ParamSpace {
  std::size_t dim = 0;  // number of parameters (0, 1 or 2)
  Vector lo, hi;        // bounds (angles are treated as bounded too; the grid covers the period)
  std::function<Vector(const Vector&)> to_point;
};

void refine(const std::function<double(const Vector&)>& eval, const ParamSpace& ps, Vector& best_param, double& best_value,
            double initial_step, std::size_t& evaluations) {
  double h = initial_step;
  for (int round = 0; round < 400 && h > 1e-14; ++round) {
    Vector cand = best_param;
    double cand_value = best_value;
    const int reach = ps.dim == 2 ? 1 : 0;
    for (int a = -1; a <= 1; ++a) {
      for (int b = -reach; b <= reach; ++b) {
        if (a == 0 && b == 0) continue;
        Vector trial = best_param;
        trial[0] = std::clamp(trial[0] + a * h, ps.lo[0], ps.hi[0]);
        if (ps.dim == 2) trial[1] = std::clamp(trial[1] + b * h, ps.lo[1], ps.hi[1]);
        const double v = eval(trial);
        ++evaluations;
        if (v > cand_value) {
          cand_value = v;
          cand = trial;
        }
      }
    }
    if (cand_value > best_value) {
      best_value = cand_value;
      best_param = cand;
    } else {
      h *= 0.5;
    }
  }
}

GridMaxReport maximize_over(const std::function<double(std::span<const double>)>& objective,
                            const std::vector<ParamSpace>& pieces, std::size_t resolution, double grid_step,
                            double lipschitz) {
  GridMaxReport rep;
  rep.value = -std::numeric_limits<double>::infinity();
  struct Candidate {
    double value;
    std::size_t piece;
    Vector param;
  };
  std::vector<Candidate> cands;
  for (std::size_t pi = 0; pi < pieces.size(); ++pi) {
    const auto& ps = pieces[pi];
    auto eval = [&](const Vector& param) { return objective(ps.to_point(param)); };
    if (ps.dim == 0) {
      cands.push_back({eval({}), pi, {}});
      ++rep.evaluations;
      continue;
    }
    const std::size_t n0 = resolution;
    const std::size_t n1 = ps.dim == 2 ? resolution : 1;
    for (std::size_t i = 0; i < n0; ++i) {
      for (std::size_t j = 0; j < n1; ++j) {
        Vector param(ps.dim);
        param[0] = ps.lo[0] + (ps.hi[0] - ps.lo[0]) * static_cast<double>(i) / static_cast<double>(n0 - 1);
        if (ps.dim == 2) {
          param[1] = ps.lo[1] + (ps.hi[1] - ps.lo[1]) * static_cast<double>(j) / static_cast<double>(n1 - 1);
        }
        cands.push_back({eval(param), pi, param});
        ++rep.evaluations;
      }
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
  const double coarse = cands.front().value;
  const std::size_t keep = std::min<std::size_t>(8, cands.size());
  for (std::size_t c = 0; c < keep; ++c) {
    auto& cand = cands[c];
    const auto& ps = pieces[cand.piece];
    if (ps.dim > 0) {
      auto eval = [&](const Vector& param) { return objective(ps.to_point(param)); };
      const double step = (ps.hi[0] - ps.lo[0]) / static_cast<double>(resolution - 1);
      refine(eval, ps, cand.param, cand.value, step, rep.evaluations);
    }
    if (cand.value > rep.value) {
      rep.value = cand.value;
      rep.maximizer = ps.to_point(cand.param);
    }
  }
  rep.error_bound = lipschitz * grid_step;
  rep.upper_estimate = std::max(rep.value, coarse + rep.error_bound);
  return rep;
}

}  // namespace

GridMaxReport grid_max_constrained(const GridMaxProblem& problem, std::size_t resolution) {
  if (problem.dim == 0) throw Error(ErrorCode::invalid_input, "zero-dimensional sphere");
  if (problem.dim > 3) throw Error(ErrorCode::capacity, "grid maximization limited to dimension 3");
  if (!problem.objective) throw Error(ErrorCode::invalid_input, "no objective");
  if (resolution < 3) throw Error(ErrorCode::invalid_parameter, "resolution must be at least 3");
  constexpr double pi = std::numbers::pi;

  std::vector<ParamSpace> pieces;
  double step = 0.0;
  if (problem.sphere == SphereKind::sup) {
    if (!problem.constraints.empty()) {
      throw Error(ErrorCode::invalid_input, "linear constraints are supported on Euclidean spheres only");
    }
    const std::size_t d = problem.dim;
    for (std::size_t face = 0; face < d; ++face) {
      for (double sign : {1.0, -1.0}) {
        ParamSpace ps;
        ps.dim = d - 1;
        ps.lo = Vector(ps.dim, -1.0);
        ps.hi = Vector(ps.dim, 1.0);
        ps.to_point = [face, sign, d](const Vector& param) {
          Vector x(d);
          std::size_t k = 0;
          for (std::size_t i = 0; i < d; ++i) x[i] = i == face ? sign : param[k++];
          return x;
        };
        pieces.push_back(std::move(ps));
      }
    }
    // Every point of a face lies within half a cell diagonal of a grid node.
    step = d == 1 ? 0.0 : 0.5 * std::sqrt(static_cast<double>(d - 1)) * 2.0 / static_cast<double>(resolution - 1);
  } else {
    Matrix basis = Matrix::identity(problem.dim);
    if (!problem.constraints.empty()) basis = nullspace(Matrix::from_rows(problem.constraints, problem.dim));
    const std::size_t d = basis.cols();
    if (d == 0) throw Error(ErrorCode::degenerate_subspace, "constraints leave only the zero vector");
    auto lift = [basis](const Vector& u) { return basis * u; };
    ParamSpace ps;
    if (d == 1) {
      for (double sign : {1.0, -1.0}) {
        ParamSpace single;
        single.dim = 0;
        single.to_point = [lift, sign](const Vector&) { return lift(Vector{sign}); };
        pieces.push_back(std::move(single));
      }
      step = 0.0;
    } else if (d == 2) {
      ps.dim = 1;
      ps.lo = {0.0};
      ps.hi = {2.0 * pi};
      ps.to_point = [lift](const Vector& a) { return lift(Vector{std::cos(a[0]), std::sin(a[0])}); };
      pieces.push_back(std::move(ps));
      step = pi / static_cast<double>(resolution - 1);
    } else {
      ps.dim = 2;
      ps.lo = {0.0, 0.0};
      ps.hi = {pi, 2.0 * pi};
      ps.to_point = [lift](const Vector& a) {
        return lift(Vector{std::sin(a[0]) * std::cos(a[1]), std::sin(a[0]) * std::sin(a[1]), std::cos(a[0])});
      };
      pieces.push_back(std::move(ps));
      step = std::sqrt(5.0) * pi / static_cast<double>(resolution - 1);
    }
  }
  return maximize_over(problem.objective, pieces, resolution, step, problem.lipschitz);
}

}  // namespace bjapprox::oracle
