#include "ign/residual_system.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ign/error.hpp"

namespace ign {

void ResidualSystem::values(std::span<const std::size_t> indices, const Vector& x,
                            Eigen::Ref<Vector> out) const {
  for (std::size_t r = 0; r < indices.size(); ++r) {
    out(static_cast<Index>(r)) = value(indices[r], x);
  }
}

void ResidualSystem::evaluate(std::span<const std::size_t> indices, const Vector& x,
                              Eigen::Ref<Vector> values, Eigen::Ref<Matrix> gradients) const {
  for (std::size_t r = 0; r < indices.size(); ++r) {
    values(static_cast<Index>(r)) = value(indices[r], x);
    gradients.col(static_cast<Index>(r)) = gradient(indices[r], x);
  }
}

double CountingSystem::value(std::size_t i, const Vector& x) const {
  ++counters_.value_evals;
  return inner_.value(i, x);
}

Vector CountingSystem::gradient(std::size_t i, const Vector& x) const {
  ++counters_.gradient_evals;
  return inner_.gradient(i, x);
}

void CountingSystem::values(std::span<const std::size_t> indices, const Vector& x,
                            Eigen::Ref<Vector> out) const {
  counters_.value_evals += indices.size();
  inner_.values(indices, x, out);
}

void CountingSystem::evaluate(std::span<const std::size_t> indices, const Vector& x,
                              Eigen::Ref<Vector> values, Eigen::Ref<Matrix> gradients) const {
  counters_.value_evals += indices.size();
  counters_.gradient_evals += indices.size();
  inner_.evaluate(indices, x, values, gradients);
}

std::vector<std::size_t> index_range(std::size_t begin, std::size_t end) {
  std::vector<std::size_t> out(end - begin);
  std::iota(out.begin(), out.end(), begin);
  return out;
}

void check_point(const ResidualSystem& sys, const Vector& x) {
  if (static_cast<std::size_t>(x.size()) != sys.dimension()) {
    std::ostringstream os;
    os << "point has dimension " << x.size() << ", system expects " << sys.dimension();
    fail(ErrorCode::DimensionMismatch, os.str());
  }
  if (!all_finite(x)) fail(ErrorCode::NonFinite, "point has non-finite entries");
}

Vector full_residual(const ResidualSystem& sys, const Vector& x) {
  check_point(sys, x);
  const auto idx = index_range(0, sys.components());
  Vector out(static_cast<Index>(idx.size()));
  sys.values(idx, x, out);
  return out;
}

void full_evaluate(const ResidualSystem& sys, const Vector& x, Vector& values, Matrix& gradients) {
  check_point(sys, x);
  const auto idx = index_range(0, sys.components());
  const auto n = static_cast<Index>(idx.size());
  values.resize(n);
  gradients.resize(static_cast<Index>(sys.dimension()), n);
  sys.evaluate(idx, x, values, gradients);
}

Matrix full_jacobian(const ResidualSystem& sys, const Vector& x) {
  Vector values;
  Matrix gradients;
  full_evaluate(sys, x, values, gradients);
  return gradients.transpose();
}

double merit(const ResidualSystem& sys, const Vector& x) {
  return 0.5 * full_residual(sys, x).squaredNorm();
}

Vector finite_diff_gradient(const ResidualSystem& sys, std::size_t i, const Vector& x, double h) {
  check_point(sys, x);
  if (h <= 0.0) h = 1e-6 * std::max(1.0, x.norm());
  const Index d = x.size();
  Vector out(d);
  Vector probe = x;
  for (Index k = 0; k < d; ++k) {
    const double xk = x(k);
    probe(k) = xk + h;
    const double plus = sys.value(i, probe);
    probe(k) = xk - h;
    const double minus = sys.value(i, probe);
    probe(k) = xk;
    out(k) = (plus - minus) / (2.0 * h);
  }
  return out;
}

}  // namespace ign
