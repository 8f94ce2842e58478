#include "bjapprox/operator_approx.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "bjapprox/error.hpp"
#include "bjapprox/orthogonality.hpp"
#include "bjapprox/scalar_min.hpp"

namespace bjapprox {

const char* to_string(AttainmentKind k) noexcept {
  switch (k) {
    case AttainmentKind::sphere_of_subspace: return "sphere-of-subspace";
    case AttainmentKind::sign_pattern_list: return "sign-pattern-list";
  }
  return "unknown";
}

namespace {

constexpr double kAttainmentTolerance = 1e-9;
constexpr std::size_t kMaxSupColumns = 20;

Vector sign_pattern(std::size_t n, std::uint64_t mask) {
  Vector s(n, 1.0);
  for (std::size_t i = 1; i < n; ++i)
    if ((mask >> (i - 1)) & 1) s[i] = -1.0;
  return s;
}

/// Maximizing sign patterns (first entry +1) within rel_tol of the maximum.
std::vector<Vector> maximizing_patterns(const Matrix& b, double rel_tol, double& norm) {
  const std::size_t n = b.cols();
  if (n > kMaxSupColumns) throw Error(ErrorCode::capacity, "sup-domain norm limited to 20 columns");
  const std::uint64_t count = std::uint64_t{1} << (n - 1);
  std::vector<double> values(count);
  norm = 0.0;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    values[mask] = norm2(b * sign_pattern(n, mask));
    norm = std::max(norm, values[mask]);
  }
  std::vector<Vector> out;
  for (std::uint64_t mask = 0; mask < count; ++mask)
    if (values[mask] >= norm * (1.0 - rel_tol)) out.push_back(sign_pattern(n, mask));
  return out;
}

/// Connected components of the maximizing vertices (both signs), where two
/// vertices are joined when they share a coordinate and have the same image:
/// the segment between them then lies in M_T.
std::size_t pattern_components(const Matrix& b, const std::vector<Vector>& half, double norm) {
  std::vector<Vector> verts;
  for (const auto& s : half) {
    verts.push_back(s);
    verts.push_back(scaled(s, -1.0));
  }
  const std::size_t m = verts.size();
  std::vector<Vector> images(m);
  for (std::size_t i = 0; i < m; ++i) images[i] = b * verts[i];
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      bool share = false;
      for (std::size_t c = 0; c < verts[i].size(); ++c) share = share || verts[i][c] == verts[j][c];
      if (share && norm2(subtract(images[i], images[j])) <= kAttainmentTolerance * norm) parent[find(i)] = find(j);
    }
  }
  std::size_t components = 0;
  for (std::size_t i = 0; i < m; ++i) components += find(i) == i;
  return components;
}

}  // namespace

OperatorNorm operator_norm(const MatrixOperator& b) {
  OperatorNorm out;
  if (b.domain_norm() == DomainNorm::euclidean) {
    out.attainment.kind = AttainmentKind::sphere_of_subspace;
    out.attainment.subspace = top_right_singular_space(b.matrix(), kAttainmentTolerance);
    out.norm = spectral_norm(b.matrix());
    out.attainment.is_pm_connected = true;
    return out;
  }
  out.attainment.kind = AttainmentKind::sign_pattern_list;
  const auto half = maximizing_patterns(b.matrix(), kAttainmentTolerance, out.norm);
  for (const auto& s : half) {
    out.attainment.patterns.push_back(s);
    out.attainment.patterns.push_back(scaled(s, -1.0));
  }
  out.attainment.is_pm_connected = out.norm == 0.0 || pattern_components(b.matrix(), half, out.norm) <= 2;
  return out;
}

NormAttainmentSet norm_attainment_set(const MatrixOperator& t) {
  if (t.is_zero()) throw Error(ErrorCode::degenerate_input, "norm attainment set of the zero operator");
  return operator_norm(t).attainment;
}

namespace {

double op_norm(const Matrix& b, DomainNorm domain) {
  if (domain == DomainNorm::euclidean) return spectral_norm(b);
  double norm = 0.0;
  maximizing_patterns(b, 0.0, norm);
  return norm;
}

SlopeInterval slopes(const Matrix& b, const Matrix& a, DomainNorm domain, double rel_tol) {
  if (b.max_abs() == 0.0) {
    const double na = op_norm(a, domain);
    return {-na, na};
  }
  if (domain == DomainNorm::euclidean) {
    const auto r = attainment_form_range(b, a, rel_tol);
    return {-r.hi / r.norm, -r.lo / r.norm};
  }
  double norm = 0.0;
  const auto pats = maximizing_patterns(b, rel_tol, norm);
  SlopeInterval out{INFINITY, -INFINITY};
  for (const auto& s : pats) {
    const Vector bs = b * s;
    const double g = -dot(bs, a * s) / norm2(bs);
    out.lo = std::min(out.lo, g);
    out.hi = std::max(out.hi, g);
  }
  return out;
}

}  // namespace

SlopeInterval subdifferential_1d(const MatrixOperator& t, const MatrixOperator& a, double lambda) {
  if (!t.compatible_with(a)) throw Error(ErrorCode::dimension_mismatch, "operators of different shape or norm");
  return slopes(t.minus(lambda, a).matrix(), a.matrix(), t.domain_norm(), kAttainmentTolerance);
}

OneDimApprox best_approx_operator_1d(const MatrixOperator& t, const MatrixOperator& a, std::optional<double> center) {
  if (!t.compatible_with(a)) throw Error(ErrorCode::dimension_mismatch, "operators of different shape or norm");
  if (a.is_zero()) throw Error(ErrorCode::degenerate_input, "approximation out of the span of the zero operator");
  const DomainNorm domain = t.domain_norm();
  OneDimApprox out;
  if (t.is_zero()) {
    out.exact = true;
    return out;
  }
  const Vector td(t.matrix().data().begin(), t.matrix().data().end());
  const Vector ad(a.matrix().data().begin(), a.matrix().data().end());
  const double c = dot(td, ad) / dot(ad, ad);
  if (norm2(axpy(td, -c, ad)) <= 1e-14 * norm2(td)) {
    out.lambda0 = c;
    out.exact = true;
    return out;
  }

  auto phi = [&](double lambda) { return op_norm(t.minus(lambda, a).matrix(), domain); };
  const double norm_t = phi(0.0);
  const double norm_a = op_norm(a.matrix(), domain);
  const double c0 = center.value_or(0.0);
  const double phi_c = phi(c0);
  double radius = 2.0 * norm_t * std::max(1.0, 1.0 / norm_a) + 1.0 + std::abs(c0);
  for (int i = 0; i < 200 && (phi(c0 - radius) <= phi_c || phi(c0 + radius) <= phi_c); ++i) radius *= 2.0;

  const auto golden = golden_section_minimize(phi, c0 - radius, c0 + radius, 1e-15);

  // Bisection on the sign of the subdifferential resolves smooth minima to
  // full precision, where golden section stalls at sqrt(eps).
  double lo = c0 - radius;
  double hi = c0 + radius;
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 300; ++it) {
    mid = 0.5 * (lo + hi);
    const SlopeInterval s = slopes(t.minus(mid, a).matrix(), a.matrix(), domain, 1e-12);
    if (s.lo > 0.0) {
      hi = mid;
    } else if (s.hi < 0.0) {
      lo = mid;
    } else {
      break;
    }
    if (hi - lo <= 1e-16 * (1.0 + std::abs(mid))) break;
  }
  const double phi_mid = phi(mid);
  if (phi_mid <= golden.value * (1.0 + 1e-15)) {
    out.lambda0 = mid;
    out.dist = phi_mid;
  } else {
    out.lambda0 = golden.argmin;
    out.dist = golden.value;
  }
  return out;
}

LambdaCondition hilbert_lambda_condition(const MatrixOperator& t, const MatrixOperator& a, double lambda0, double tol) {
  if (!t.compatible_with(a)) throw Error(ErrorCode::dimension_mismatch, "operators of different shape or norm");
  if (t.domain_norm() != DomainNorm::euclidean) {
    throw Error(ErrorCode::invalid_input, "the lambda condition is stated for Euclidean domains");
  }
  const MatrixOperator b = t.minus(lambda0, a);
  if (b.is_zero()) throw Error(ErrorCode::degenerate_input, "T - lambda0 A is the zero operator");
  // <Tx, Ax> - lambda0 ||Ax||^2 = <(T - lambda0 A)x, Ax>.
  const auto verdict = bj_orthogonal_matrices_hilbert(b, a, tol);
  return {verdict.is_orthogonal, *verdict.witness, verdict.margin};
}

double projected_residual(const Matrix& t, const Matrix& a, std::span<const double> x) {
  const Vector u = t * x;
  const Vector w = a * x;
  const double nw = norm2(w);
  if (nw <= 1e-14 * a.max_abs() * norm2(x)) return norm2(u);
  const Vector wu = scaled(w, 1.0 / nw);
  return norm2(axpy(u, -dot(u, wu), wu));
}

namespace {

Vector unit(Vector v) {
  const double n = norm2(v);
  for (double& x : v) x /= n;
  return v;
}

/// Gradient of ||Tx||^2 - <Tx, Ax>^2 / ||Ax||^2.
Vector residual_gradient(const Matrix& t, const Matrix& a, const Vector& x) {
  const Vector u = t * x;
  const Vector w = a * x;
  const double s = dot(w, w);
  Vector g = scaled(transpose_times(t, u), 2.0);
  if (s <= 1e-28 * a.max_abs() * a.max_abs()) return g;
  const double c = dot(u, w);
  g = axpy(g, -2.0 * c / s, axpy(transpose_times(t, w), 1.0, transpose_times(a, u)));
  return axpy(g, 2.0 * c * c / (s * s), transpose_times(a, w));
}

Vector sphere_ascent(const Matrix& t, const Matrix& a, Vector x) {
  x = unit(std::move(x));
  double value = projected_residual(t, a, x);
  double h = 0.5;
  for (int it = 0; it < 5000 && h > 1e-15; ++it) {
    Vector g = residual_gradient(t, a, x);
    g = axpy(g, -dot(g, x), x);
    const double gn = norm2(g);
    if (gn == 0.0) break;
    bool improved = false;
    for (; h > 1e-15; h *= 0.5) {
      Vector trial = unit(axpy(x, h / gn, g));
      const double v = projected_residual(t, a, trial);
      if (v > value) {
        x = std::move(trial);
        value = v;
        improved = true;
        break;
      }
    }
    if (!improved) break;
    h = std::min(2.0 * h, 1.0);
  }
  return x;
}

}  // namespace

namespace {

ConstrainedMax ascend_constrained(const Matrix& t, const Matrix& a, std::uint64_t seed, int restarts) {
  const std::size_t n = t.cols();
  std::vector<Vector> starts;
  const auto eig = symmetric_eigen(t.transpose() * t);
  for (std::size_t j = 0; j < n; ++j) starts.push_back(eig.vectors.column(j));
  // Peaks get narrow where ||Ax|| is small.
  const auto a_eig = symmetric_eigen(a.transpose() * a);
  for (std::size_t j = 0; j < n; ++j) starts.push_back(a_eig.vectors.column(j));
  if (n == 2 || n == 3) {
    // The best points of a fixed grid on the half sphere.
    std::vector<std::pair<double, Vector>> grid;
    const int m = n == 2 ? 2000 : 60;
    for (int i = 0; i < m; ++i) {
      const double theta = M_PI * i / m;
      if (n == 2) {
        Vector x{std::cos(theta), std::sin(theta)};
        grid.emplace_back(projected_residual(t, a, x), std::move(x));
        continue;
      }
      for (int j = 0; j < 2 * m; ++j) {
        const double phi = M_PI * j / m;
        Vector x{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
        grid.emplace_back(projected_residual(t, a, x), std::move(x));
      }
    }
    const std::size_t keep = std::min<std::size_t>(8, grid.size());
    std::partial_sort(grid.begin(), grid.begin() + static_cast<std::ptrdiff_t>(keep), grid.end(),
                      [](const auto& l, const auto& r) { return l.first > r.first; });
    for (std::size_t i = 0; i < keep; ++i) starts.push_back(grid[i].second);
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int r = 0; r < restarts; ++r) {
    Vector v(n);
    for (double& x : v) x = normal(rng);
    if (norm2(v) > 0.0) starts.push_back(std::move(v));
  }
  ConstrainedMax best;
  best.value = -1.0;
  // On N(A) the objective is ||Tx|| and jumps up from its surroundings, so
  // ascent cannot reach a maximizer there; take the kernel maximum directly.
  const Matrix kernel = nullspace(a);
  if (kernel.cols() > 0) {
    const auto top = symmetric_eigen((t * kernel).transpose() * (t * kernel));
    Vector x = unit(kernel * top.vectors.column(0));
    best.value = projected_residual(t, a, x);
    best.maximizer = std::move(x);
    // Spikes sit just off the kernel at z + eps r with <Ar, Tz> = 0, where the
    // objective tends to ||Tz||.
    std::mt19937_64 near_rng(seed ^ 0x5bd1e995ULL);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t j = 0; j < std::min<std::size_t>(kernel.cols(), 3); ++j) {
      const Vector z = unit(kernel * top.vectors.column(j));
      const Vector c = transpose_times(a, t * z);
      for (int r = 0; r < 4; ++r) {
        Vector dir(n);
        for (double& v : dir) v = normal(near_rng);
        for (std::size_t k = 0; k < kernel.cols(); ++k) dir = axpy(dir, -dot(dir, kernel.column(k)), kernel.column(k));
        const double cc = dot(c, c);
        if (cc > 0.0) dir = axpy(dir, -dot(c, dir) / cc, c);
        if (norm2(dir) == 0.0) continue;
        dir = unit(std::move(dir));
        for (double eps : {1e-1, 1e-2, 1e-3}) starts.push_back(axpy(z, eps, dir));
      }
    }
  }
  for (auto& s : starts) {
    Vector x = sphere_ascent(t, a, s);
    const double v = projected_residual(t, a, x);
    if (v > best.value) {
      best.value = v;
      best.maximizer = std::move(x);
    }
  }
  return best;
}

}  // namespace

ConstrainedMax constrained_max_euclidean(const Matrix& t, const Matrix& a, std::uint64_t seed, int restarts) {
  if (t.rows() != a.rows() || t.cols() != a.cols()) throw Error(ErrorCode::dimension_mismatch, "operator shapes differ");
  ConstrainedMax best = ascend_constrained(t, a, seed, restarts);
  // max <Tx, y> over unit x, y with <Ax, y> = 0 is symmetric in (x, y): the
  // same value is the constrained maximum of (T^T, A^T) over y. A maximizing
  // y gives x = (I - P_{A^T y}) T^T y.
  const Matrix tt = t.transpose(), at = a.transpose();
  const ConstrainedMax dual = ascend_constrained(tt, at, seed, restarts);
  const Vector& y = dual.maximizer;
  const Vector u = tt * y;
  const Vector w = at * y;
  const double nw = norm2(w);
  Vector x = nw <= 1e-14 * a.max_abs() ? u : axpy(u, -dot(u, w) / (nw * nw), w);
  if (norm2(x) > 0.0) {
    x = unit(std::move(x));
    const double v = projected_residual(t, a, x);
    if (v > best.value) {
      best.value = v;
      best.maximizer = std::move(x);
    }
  }
  return best;
}

ConstrainedMax constrained_max_sup(const Matrix& t, const Matrix& a) {
  if (t.rows() != a.rows() || t.cols() != a.cols()) throw Error(ErrorCode::dimension_mismatch, "operator shapes differ");
  const std::size_t n = t.cols();
  if (n > 3) throw Error(ErrorCode::capacity, "sup-sphere maximization is limited to 3 columns");
  ConstrainedMax best;
  if (n == 1) {
    best.maximizer = {1.0};
    best.value = projected_residual(t, a, best.maximizer);
    return best;
  }
  // The objective is even, so the faces x_i = +1 suffice.
  const std::size_t free = n - 1;
  const std::size_t per_axis = free == 1 ? 1001 : 32;
  const double spacing = 2.0 / static_cast<double>(per_axis - 1);
  best.value = -1.0;
  for (std::size_t face = 0; face < n; ++face) {
    auto point = [&](const Vector& params) {
      Vector x(n);
      for (std::size_t i = 0, k = 0; i < n; ++i) x[i] = i == face ? 1.0 : params[k++];
      return x;
    };
    auto eval = [&](const Vector& params) { return projected_residual(t, a, point(params)); };

    Vector face_best;
    double face_value = -1.0;
    Vector params(free);
    const std::size_t total = free == 1 ? per_axis : per_axis * per_axis;
    for (std::size_t idx = 0; idx < total; ++idx) {
      params[0] = -1.0 + spacing * static_cast<double>(idx % per_axis);
      if (free == 2) params[1] = -1.0 + spacing * static_cast<double>(idx / per_axis);
      const double v = eval(params);
      if (v > face_value) {
        face_value = v;
        face_best = params;
      }
    }

    // Pattern search inside the face, steps halving from the grid spacing.
    for (double h = spacing; h > 1e-13;) {
      bool moved = false;
      for (int dx = -1; dx <= 1; ++dx) {
        for (int dy = -1; dy <= 1; ++dy) {
          if ((dx == 0 && dy == 0) || (free == 1 && dy != 0)) continue;
          Vector trial = face_best;
          trial[0] = std::clamp(trial[0] + dx * h, -1.0, 1.0);
          if (free == 2) trial[1] = std::clamp(trial[1] + dy * h, -1.0, 1.0);
          const double v = eval(trial);
          if (v > face_value) {
            face_value = v;
            face_best = trial;
            moved = true;
          }
        }
      }
      if (!moved) h *= 0.5;
    }
    if (face_value > best.value) {
      best.value = face_value;
      best.maximizer = point(face_best);
    }
  }
  return best;
}

double dist_formula_hilbert(const MatrixOperator& t, const MatrixOperator& a, std::uint64_t seed, int restarts) {
  if (!t.compatible_with(a)) throw Error(ErrorCode::dimension_mismatch, "operators of different shape or norm");
  if (t.domain_norm() != DomainNorm::euclidean) {
    throw Error(ErrorCode::invalid_input, "the Hilbert distance formula needs a Euclidean domain");
  }
  return constrained_max_euclidean(t.matrix(), a.matrix(), seed, restarts).value;
}

SmoothCodomainDistance dist_formula_smooth_codomain(const MatrixOperator& t, const MatrixOperator& a) {
  if (!t.compatible_with(a)) throw Error(ErrorCode::dimension_mismatch, "operators of different shape or norm");
  if (t.domain_norm() != DomainNorm::sup) throw Error(ErrorCode::invalid_input, "the formula is for sup domains");
  if (t.cols() > 3) throw Error(ErrorCode::capacity, "sup-sphere maximization is limited to 3 columns");
  SmoothCodomainDistance out;
  const auto one = best_approx_operator_1d(t, a);
  out.lambda0 = one.lambda0;
  if (one.exact) {
    out.hypothesis_satisfied = true;
    out.maximizer = Vector(t.cols(), 1.0);
    return out;
  }
  const auto cm = constrained_max_sup(t.matrix(), a.matrix());
  out.value = cm.value;
  out.maximizer = cm.maximizer;
  out.hypothesis_satisfied = norm_attainment_set(t.minus(one.lambda0, a)).is_pm_connected;
  return out;
}

double lemma_norm_eval(const MatrixOperator& t, const MatrixOperator& a, std::uint64_t seed, double rel_tol) {
  if (!t.compatible_with(a)) throw Error(ErrorCode::dimension_mismatch, "operators of different shape or norm");
  if (t.is_zero()) throw Error(ErrorCode::degenerate_input, "norm of the zero operator");
  const auto norm = operator_norm(t);
  const auto one = best_approx_operator_1d(t, a);
  if (one.exact || norm.norm > one.dist * (1.0 + 1e-9)) {
    throw Error(ErrorCode::precondition, "T is not orthogonal to A: ||T|| exceeds dist(T, span{A})");
  }
  if (!norm.attainment.is_pm_connected) {
    throw Error(ErrorCode::precondition, "M_T is not of the form +-D with D connected");
  }
  const double value = t.domain_norm() == DomainNorm::euclidean
                           ? constrained_max_euclidean(t.matrix(), a.matrix(), seed).value
                           : constrained_max_sup(t.matrix(), a.matrix()).value;
  if (std::abs(value - norm.norm) > rel_tol * norm.norm) {
    throw Error(ErrorCode::internal_inconsistency, "constrained maximum " + std::to_string(value) +
                                                       " differs from the norm " + std::to_string(norm.norm));
  }
  return value;
}

namespace {

/// Relative orthogonality gap of B against sum gamma_i A_i, restricted to the
/// top space of B: the forms x -> <Bx, A_i x> are compressed once.
struct GammaProblem {
  double norm_b = 0.0;
  std::vector<Matrix> forms;
  std::span<const MatrixOperator> as;

  double margin(const Vector& gamma) const {
    Matrix s(forms[0].rows(), forms[0].cols());
    for (std::size_t i = 0; i < forms.size(); ++i) s = s + gamma[i] * forms[i];
    const auto eig = symmetric_eigen(s);
    const double lo = eig.values.back();
    const double hi = eig.values.front();
    const double gap = lo > 0 ? lo : (hi < 0 ? -hi : 0.0);
    return gap / (norm_b * spectral_norm(linear_combination(as, gamma).matrix()));
  }
};

std::optional<Vector> search_gamma(const Matrix& b, std::span<const MatrixOperator> as, std::uint64_t seed) {
  const std::size_t k = as.size();
  GammaProblem prob;
  prob.as = as;
  prob.norm_b = spectral_norm(b);
  const Matrix v = top_right_singular_space(b, kAttainmentTolerance);
  for (const auto& a : as) {
    const Matrix c = v.transpose() * (a.matrix().transpose() * b) * v;
    prob.forms.push_back(0.5 * (c + c.transpose()));
  }

  std::vector<Vector> starts;
  // Exact when the top space is a line: gamma orthogonal to the traces.
  Vector traces(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < v.cols(); ++j) traces[i] += prob.forms[i](j, j);
  if (norm2(traces) > 0.0) {
    const Matrix perp = orthogonal_complement(Matrix::from_columns({traces}, k));
    if (perp.cols() > 0) starts.push_back(perp.column(0));
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int r = 0; r < 32; ++r) {
    Vector g(k);
    for (double& x : g) x = normal(rng);
    starts.push_back(std::move(g));
  }

  for (auto& s : starts) {
    if (norm2(s) == 0.0) continue;
    Vector gamma = unit(s);
    double m = prob.margin(gamma);
    for (double h = 0.5; h > 1e-13 && m > 1e-13;) {
      const Matrix tangent = orthogonal_complement(Matrix::from_columns({gamma}, k));
      bool moved = false;
      for (std::size_t d = 0; d < tangent.cols() && !moved; ++d) {
        for (double sign : {1.0, -1.0}) {
          Vector trial = unit(axpy(gamma, sign * h, tangent.column(d)));
          const double mt = prob.margin(trial);
          if (mt < m) {
            gamma = std::move(trial);
            m = mt;
            moved = true;
            break;
          }
        }
      }
      if (!moved) h *= 0.5;
    }
    const auto c = linear_combination(as, gamma);
    if (bj_orthogonal_matrices_hilbert(MatrixOperator(b), c, kDefaultTolerance).is_orthogonal) return gamma;
  }
  return std::nullopt;
}

}  // namespace

NdimCertificateReport verify_ndim_certificate_hilbert(const MatrixOperator& t, std::span<const MatrixOperator> as,
                                                      std::span<const double> alpha,
                                                      std::span<const Vector> beta_samples, std::uint64_t seed,
                                                      double rel_tol) {
  const std::size_t k = as.size();
  if (k < 2) throw Error(ErrorCode::invalid_input, "the certificate needs at least two operators");
  if (alpha.size() != k) throw Error(ErrorCode::dimension_mismatch, "alpha has the wrong length");
  for (const auto& a : as)
    if (!t.compatible_with(a)) throw Error(ErrorCode::dimension_mismatch, "operators of different shape or norm");
  if (t.domain_norm() != DomainNorm::euclidean) throw Error(ErrorCode::invalid_input, "Euclidean operators expected");

  Matrix stack(t.rows() * t.cols(), k);
  for (std::size_t i = 0; i < k; ++i) stack.set_column(i, as[i].matrix().data());
  if (numerical_rank(stack) < k) throw Error(ErrorCode::rank_deficient, "approximating operators are linearly dependent");

  NdimCertificateReport rep;
  const Matrix b_alpha = combination_residual(t, as, alpha).matrix();
  rep.norm_alpha = spectral_norm(b_alpha);
  const Vector fit = stack * least_squares(stack, t.matrix().data());
  if (norm2(subtract(fit, t.matrix().data())) <= 1e-12 * norm2(t.matrix().data())) {
    rep.degenerate = true;
    rep.holds = true;
    return rep;
  }

  bool failed = false;
  for (std::size_t s = 0; s < beta_samples.size(); ++s) {
    const Vector& beta = beta_samples[s];
    if (beta.size() != k) throw Error(ErrorCode::dimension_mismatch, "beta sample has the wrong length");
    CertificateSample out;
    out.beta = beta;
    const Matrix b_beta = combination_residual(t, as, beta).matrix();
    out.norm_beta = spectral_norm(b_beta);
    out.gamma = search_gamma(b_beta, as, seed + s);
    if (out.gamma) {
      const Matrix c = linear_combination(as, *out.gamma).matrix();
      out.max_beta = constrained_max_euclidean(b_beta, c, seed + s).value;
      out.max_alpha = constrained_max_euclidean(b_alpha, c, seed + s).value;
      out.ok = std::abs(out.max_beta - out.norm_beta) <= rel_tol * out.norm_beta &&
               std::abs(out.max_alpha - rep.norm_alpha) <= rel_tol * rep.norm_alpha &&
               out.max_beta >= out.max_alpha - rel_tol * out.norm_beta;
      failed = failed || !out.ok;
    } else {
      rep.inconclusive = true;
    }
    rep.samples.push_back(std::move(out));
  }
  if (failed) rep.inconclusive = false;
  rep.holds = !failed && !rep.inconclusive;
  return rep;
}

}  // namespace bjapprox
