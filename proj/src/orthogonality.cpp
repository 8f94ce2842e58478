#include "bjapprox/orthogonality.hpp"

#include <algorithm>
#include <cmath>

#include "bjapprox/error.hpp"
#include "bjapprox/scalar_min.hpp"

namespace bjapprox {

const char* to_string(StrongOrthogonality s) noexcept {
  switch (s) {
    case StrongOrthogonality::strong: return "strong";
    case StrongOrthogonality::orthogonal_not_strong: return "orthogonal-not-strong";
    case StrongOrthogonality::not_orthogonal: return "not-orthogonal";
  }
  return "unknown";
}

namespace {

void require_same_space(const LpVector& x, const LpVector& y) {
  if (x.size() != y.size() || x.exponent() != y.exponent()) {
    throw Error(ErrorCode::dimension_mismatch, "vectors from different spaces");
  }
}

double section_norm(const LpVector& x, const LpVector& y, double t) {
  return lp_norm(axpy(x.coords(), t, y.coords()), x.space_p());
}

}  // namespace

OrthogonalityVerdict bj_orthogonal_vectors(const LpVector& x, const LpVector& y, double tol) {
  require_same_space(x, y);
  const double nx = lp_norm(x);
  const double ny = lp_norm(y);
  if (nx == 0.0 || ny == 0.0) throw Error(ErrorCode::degenerate_input, "orthogonality test with a zero vector");

  const double bound = 2.0 * nx / ny + 1.0;
  const auto best = golden_section_minimize([&](double t) { return section_norm(x, y, t); }, -bound, bound);
  // t = 0 is always a candidate; golden section may stop short of it on a flat section.
  const double value = std::min(best.value, nx);
  const double minimizer = best.value < nx ? best.argmin : 0.0;

  OrthogonalityVerdict v;
  v.margin = (value - nx) / nx;
  v.is_orthogonal = v.margin >= -tol;
  v.minimizer = minimizer;
  return v;
}

StrongVerdict strong_bj_orthogonal(const LpVector& x, const LpVector& y, double delta, double tol) {
  if (!(delta > 0.0)) throw Error(ErrorCode::invalid_parameter, "certification radius must be positive");
  const auto base = bj_orthogonal_vectors(x, y, tol);
  const double nx = lp_norm(x);

  StrongVerdict out;
  out.certification_radius = delta;
  out.minimizer = *base.minimizer;
  out.margin = base.margin;
  out.growth_plus = (section_norm(x, y, delta) - nx) / nx;
  out.growth_minus = (section_norm(x, y, -delta) - nx) / nx;
  if (!base.is_orthogonal) {
    out.classification = StrongOrthogonality::not_orthogonal;
  } else if (out.growth_plus > tol && out.growth_minus > tol && std::abs(out.minimizer) <= delta) {
    out.classification = StrongOrthogonality::strong;
  } else {
    out.classification = StrongOrthogonality::orthogonal_not_strong;
  }
  return out;
}

SemiconeMembership semicone_membership(const LpVector& x, const LpVector& y, double tol) {
  require_same_space(x, y);
  const double nx = lp_norm(x);
  if (nx == 0.0) throw Error(ErrorCode::degenerate_input, "semicone of the zero vector");
  SemiconeMembership m;
  m.derivative = sip(y, x) / nx;
  const double slack = tol * lp_norm(y);
  m.in_plus = m.derivative >= -slack;
  m.in_minus = m.derivative <= slack;
  return m;
}

OrthogonalityVerdict bj_orthogonal_functionals(const Functional& f, const Functional& g, double tol) {
  if (f.size() != g.size() || f.exponent() != g.exponent()) {
    throw Error(ErrorCode::dimension_mismatch, "functionals on different spaces");
  }
  const LpVector xhat = norm_attainment_point(f);
  const double ng = g.norm();
  OrthogonalityVerdict v;
  v.margin = ng == 0.0 ? 0.0 : -std::abs(g(xhat)) / ng;
  v.is_orthogonal = v.margin >= -tol;
  v.witness = xhat.values();
  return v;
}

Matrix top_right_singular_space(const Matrix& b, double rel_tol) {
  const auto eig = symmetric_eigen(b.transpose() * b);
  const double top = eig.values.front();
  std::size_t d = 1;
  while (d < eig.values.size() && eig.values[d] >= top - rel_tol * std::abs(top)) ++d;
  Matrix v(b.cols(), d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t i = 0; i < b.cols(); ++i) v(i, k) = eig.vectors(i, k);
  return v;
}

AttainmentFormRange attainment_form_range(const Matrix& b, const Matrix& a, double rel_tol) {
  if (b.rows() != a.rows() || b.cols() != a.cols()) throw Error(ErrorCode::dimension_mismatch, "operator shapes differ");
  AttainmentFormRange r;
  r.top_space = top_right_singular_space(b, rel_tol);
  r.norm = norm2(b * r.top_space.column(0));
  // Compression of A^T B to the top space, symmetrized: over real unit vectors
  // the form x -> <Bx, Ax> ranges over its eigenvalue interval.
  const Matrix c = r.top_space.transpose() * (a.transpose() * b) * r.top_space;
  const Matrix s = 0.5 * (c + c.transpose());
  const auto eig = symmetric_eigen(s);
  r.hi = eig.values.front();
  r.lo = eig.values.back();
  r.hi_vector = r.top_space * eig.vectors.column(0);
  r.lo_vector = r.top_space * eig.vectors.column(eig.values.size() - 1);
  return r;
}

Vector zero_of_form(const AttainmentFormRange& range) {
  const double wp = std::sqrt(std::max(0.0, -range.lo));
  const double wm = std::sqrt(std::max(0.0, range.hi));
  if (wp == 0.0 && wm == 0.0) return range.hi_vector;
  Vector x = axpy(scaled(range.hi_vector, wp), wm, range.lo_vector);
  return scaled(x, 1.0 / norm2(x));
}

OrthogonalityVerdict bj_orthogonal_matrices_hilbert(const MatrixOperator& t, const MatrixOperator& a, double tol) {
  if (!t.compatible_with(a)) throw Error(ErrorCode::dimension_mismatch, "operators of different shape or norm");
  if (t.domain_norm() != DomainNorm::euclidean) {
    throw Error(ErrorCode::invalid_input, "Hilbert-space orthogonality needs a Euclidean domain");
  }
  if (t.is_zero()) throw Error(ErrorCode::degenerate_input, "orthogonality of the zero operator");

  const auto range = attainment_form_range(t.matrix(), a.matrix());
  const double scale = range.norm * std::max(spectral_norm(a.matrix()), 1e-300);
  OrthogonalityVerdict v;
  const double gap = range.lo > 0 ? range.lo : (range.hi < 0 ? -range.hi : 0.0);
  v.margin = -gap / scale;
  v.is_orthogonal = v.margin >= -tol;
  if (v.is_orthogonal) {
    v.witness = zero_of_form(range);
  } else {
    v.witness = range.lo > 0 ? range.lo_vector : range.hi_vector;
  }
  return v;
}

}  // namespace bjapprox
