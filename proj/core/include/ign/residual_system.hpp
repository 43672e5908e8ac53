#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ign/linalg.hpp"

namespace ign {

/// A map f: R^d -> R^n accessed one component at a time.
///
/// Implementations must be deterministic for fixed (i, x) and safe for
/// concurrent const use. The block methods exist so that problems whose
/// components share work (e.g. a softmax over the data) can amortize it;
/// overrides must produce bit-identical results to the per-component
/// methods.
class ResidualSystem {
 public:
  virtual ~ResidualSystem() = default;

  /// n
  virtual std::size_t components() const = 0;
  /// d
  virtual std::size_t dimension() const = 0;

  virtual double value(std::size_t i, const Vector& x) const = 0;
  virtual Vector gradient(std::size_t i, const Vector& x) const = 0;

  /// values[r] = f_{indices[r]}(x)
  virtual void values(std::span<const std::size_t> indices, const Vector& x,
                      Eigen::Ref<Vector> out) const;

  /// values[r] = f_{indices[r]}(x), gradients.col(r) = g_{indices[r]}(x)
  virtual void evaluate(std::span<const std::size_t> indices, const Vector& x,
                        Eigen::Ref<Vector> values, Eigen::Ref<Matrix> gradients) const;

  virtual std::optional<Vector> known_solution() const { return std::nullopt; }
};

struct EvalCounters {
  std::uint64_t value_evals = 0;
  std::uint64_t gradient_evals = 0;

  double epochs(std::size_t n) const {
    return static_cast<double>(gradient_evals) / static_cast<double>(n);
  }
};

/// Decorator that counts component evaluations. Single owner: the counters
/// are updated from const methods and are not synchronized.
class CountingSystem final : public ResidualSystem {
 public:
  explicit CountingSystem(const ResidualSystem& inner) : inner_(inner) {}

  std::size_t components() const override { return inner_.components(); }
  std::size_t dimension() const override { return inner_.dimension(); }
  double value(std::size_t i, const Vector& x) const override;
  Vector gradient(std::size_t i, const Vector& x) const override;
  void values(std::span<const std::size_t> indices, const Vector& x,
              Eigen::Ref<Vector> out) const override;
  void evaluate(std::span<const std::size_t> indices, const Vector& x, Eigen::Ref<Vector> values,
                Eigen::Ref<Matrix> gradients) const override;
  std::optional<Vector> known_solution() const override { return inner_.known_solution(); }

  const EvalCounters& counters() const { return counters_; }
  void reset() { counters_ = {}; }

 private:
  const ResidualSystem& inner_;
  mutable EvalCounters counters_;
};

/// Contiguous index list [begin, end).
std::vector<std::size_t> index_range(std::size_t begin, std::size_t end);

/// f(x), length n.
Vector full_residual(const ResidualSystem& sys, const Vector& x);

/// J(x), n x d, row i = g_i(x)^T.
Matrix full_jacobian(const ResidualSystem& sys, const Vector& x);

/// J(x)^T as d x n (gradients as columns) together with f(x).
void full_evaluate(const ResidualSystem& sys, const Vector& x, Vector& values, Matrix& gradients);

/// phi(x) = 1/2 ||f(x)||^2
double merit(const ResidualSystem& sys, const Vector& x);

/// Central-difference approximation of g_i(x). h <= 0 selects
/// 1e-6 * max(1, ||x||).
Vector finite_diff_gradient(const ResidualSystem& sys, std::size_t i, const Vector& x,
                            double h = 0.0);

/// Throws DimensionMismatch / NonFinite when x is not a valid point for sys.
void check_point(const ResidualSystem& sys, const Vector& x);

}  // namespace ign
