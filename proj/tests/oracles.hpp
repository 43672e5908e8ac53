#pragma once

// Reference computations for the tests. Each one takes a different route
// from the library code it checks (LU instead of Cholesky/SMW, QR instead
// of normal equations, bisection instead of iteration, closed forms).

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "ign/random.hpp"
#include "ign/residual_system.hpp"

namespace oracle {

using ign::Index;
using ign::Matrix;
using ign::Vector;

inline Matrix dense_inverse(const Matrix& m) { return m.fullPivLu().inverse(); }

inline double cond2(const Matrix& m) {
  const Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  return s(0) / s(s.size() - 1);
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

/// Root of a sign-changing scalar function on [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double tol = 1e-13) {
  double flo = f(lo);
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Smaller eigenvalue of a symmetric 2x2 matrix from its characteristic
/// polynomial.
inline double min_eig_2x2(double a, double b, double d) {
  const double tr = a + d;
  const double det = a * d - b * b;
  return 0.5 * (tr - std::sqrt(tr * tr - 4.0 * det));
}

/// Random SPD matrix with eigenvalues in [1, 1 + spread].
inline Matrix random_spd(ign::Rng& rng, Index d, double spread = 4.0) {
  const Matrix q = rng.normal_matrix(d, d).householderQr().householderQ();
  Vector eig(d);
  for (Index i = 0; i < d; ++i) eig(i) = 1.0 + spread * rng.canonical();
  return q * eig.asDiagonal() * q.transpose();
}

/// Gauss-Newton step through a QR least-squares solve of J s = f.
inline Vector gn_step_qr(const ign::ResidualSystem& sys, const Vector& x) {
  const Matrix j = ign::full_jacobian(sys, x);
  const Vector f = ign::full_residual(sys, x);
  return x - j.colPivHouseholderQr().solve(f);
}

/// Rate sequence straight from its definition, long double accumulation.
inline std::vector<double> rate_sequence(std::size_t n, double nu, std::size_t horizon) {
  std::vector<long double> a(horizon + 1);
  a[0] = 1.0L;
  const long double p = 1.0L + nu;
  const long double denom = 2.0L * p * static_cast<long double>(n);
  for (std::size_t t = 1; t <= horizon; ++t) {
    long double s = 0.0L;
    const std::size_t first = t > n ? t - n : 0;
    for (std::size_t j = first; j < t; ++j) s += std::pow(a[j], p);
    if (t <= n) s += static_cast<long double>(n - t);
    a[t] = s / denom;
  }
  return {a.begin(), a.end()};
}

/// f(x) = x^2 - 4 with n = d = 1.
class ScalarSquare final : public ign::ResidualSystem {
 public:
  std::size_t components() const override { return 1; }
  std::size_t dimension() const override { return 1; }
  double value(std::size_t, const Vector& x) const override { return x(0) * x(0) - 4.0; }
  Vector gradient(std::size_t, const Vector& x) const override {
    return Vector::Constant(1, 2.0 * x(0));
  }
  std::optional<Vector> known_solution() const override { return Vector::Constant(1, 2.0); }
};

/// Wraps a system and negates the gradient of one component.
class FlippedGradient final : public ign::ResidualSystem {
 public:
  FlippedGradient(const ign::ResidualSystem& inner, std::size_t bad)
      : inner_(inner), bad_(bad) {}
  std::size_t components() const override { return inner_.components(); }
  std::size_t dimension() const override { return inner_.dimension(); }
  double value(std::size_t i, const Vector& x) const override { return inner_.value(i, x); }
  Vector gradient(std::size_t i, const Vector& x) const override {
    Vector g = inner_.gradient(i, x);
    if (i == bad_) g = -g;
    return g;
  }

 private:
  const ign::ResidualSystem& inner_;
  std::size_t bad_;
};

}  // namespace oracle
