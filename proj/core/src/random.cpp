#include "ign/random.hpp"

#include <cmath>
#include <numbers>

namespace ign {

double Rng::canonical() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * canonical(); }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = canonical();
  while (u1 <= 0.0) u1 = canonical();
  const double u2 = canonical();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Vector Rng::uniform_vector(Index n, double lo, double hi) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = uniform(lo, hi);
  return v;
}

// Row-major fill order so that row i is drawn before row i+1.
Matrix Rng::uniform_matrix(Index rows, Index cols, double lo, double hi) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = uniform(lo, hi);
  return m;
}

Matrix Rng::normal_matrix(Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = normal();
  return m;
}

}  // namespace ign
