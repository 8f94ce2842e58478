#pragma once

// Seeded generators and small brute-force oracles shared by the test
// binaries. The oracles deliberately avoid the library's own solvers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "bjapprox/dense.hpp"

namespace testing_support {

using bjapprox::Matrix;
using bjapprox::Vector;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double normal() { return normal_(gen_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  std::uint64_t bits() { return gen_(); }

  Vector normal_vector(std::size_t n) {
    Vector v(n);
    for (double& x : v) x = normal();
    return v;
  }

  Matrix normal_matrix(std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = normal();
    return m;
  }

  /// Nonzero scalar with magnitude in [0.1, 10] and random sign.
  double nonzero_scalar() {
    const double mag = std::exp(uniform(std::log(0.1), std::log(10.0)));
    return uniform(0.0, 1.0) < 0.5 ? -mag : mag;
  }

  template <class T>
  const T& pick(const std::vector<T>& items) {
    return items[static_cast<std::size_t>(integer(0, static_cast<int>(items.size()) - 1))];
  }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

inline double rel_diff(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

/// Plain sum-of-powers l_p norm, no scaling tricks.
inline double naive_lp_norm(const Vector& v, double p) {
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x), p);
  return std::pow(s, 1.0 / p);
}

struct ScanResult {
  double argmin = 0.0;
  double value = 0.0;
};

/// Minimum of a convex function on [lo, hi]: uniform scan, then ternary
/// search around the best sample. Accurate to rounding in the value.
inline ScanResult scan_minimize(const std::function<double(double)>& f, double lo, double hi, int samples = 2001) {
  double best_t = lo;
  double best = f(lo);
  const double h = (hi - lo) / (samples - 1);
  for (int i = 1; i < samples; ++i) {
    const double t = lo + h * i;
    const double v = f(t);
    if (v < best) {
      best = v;
      best_t = t;
    }
  }
  double a = std::max(lo, best_t - h);
  double b = std::min(hi, best_t + h);
  for (int it = 0; it < 300 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
    const double m1 = a + (b - a) / 3.0;
    const double m2 = b - (b - a) / 3.0;
    if (f(m1) < f(m2)) {
      b = m2;
    } else {
      a = m1;
    }
  }
  const double t = 0.5 * (a + b);
  const double v = f(t);
  if (v < best) return {t, v};
  return {best_t, best};
}

/// Largest singular value by power iteration on a^T a from several starts.
inline double power_spectral_norm(const Matrix& a, int iterations = 3000) {
  const std::size_t n = a.cols();
  double best = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    Vector x(n, 0.1);
    x[s] = 1.0;
    for (int it = 0; it < iterations; ++it) {
      const Vector y = bjapprox::transpose_times(a, a * x);
      const double ny = bjapprox::norm2(y);
      if (ny == 0.0) break;
      x = bjapprox::scaled(y, 1.0 / ny);
    }
    best = std::max(best, bjapprox::norm2(a * x));
  }
  return best;
}

}  // namespace testing_support
