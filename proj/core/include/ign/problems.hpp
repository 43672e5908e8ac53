#pragma once

// Test problems: an affine fixture, Chandrasekhar's H-equation, nonconvex
// regularized logistic regression and soft-maximum minimization. The last
// two are posed as f(x) = grad(objective) = 0, so their component
// gradients are Hessian rows.

#include <cstdint>
#include <optional>

#include "ign/residual_system.hpp"

namespace ign {

/// N labeled samples; row j of `features` is a_j, labels are -1 or +1.
struct LabeledDataset {
  Matrix features;
  Vector labels;

  std::size_t size() const { return static_cast<std::size_t>(features.rows()); }
  std::size_t dimension() const { return static_cast<std::size_t>(features.cols()); }
};

/// f(x) = A x - b
class AffineSystem final : public ResidualSystem {
 public:
  AffineSystem(Matrix a, Vector b, std::optional<Vector> solution = std::nullopt);

  std::size_t components() const override { return static_cast<std::size_t>(a_.rows()); }
  std::size_t dimension() const override { return static_cast<std::size_t>(a_.cols()); }
  double value(std::size_t i, const Vector& x) const override;
  Vector gradient(std::size_t i, const Vector& x) const override;
  std::optional<Vector> known_solution() const override { return solution_; }

  const Matrix& matrix() const { return a_; }
  const Vector& rhs() const { return b_; }

 private:
  Matrix a_;
  Vector b_;
  std::optional<Vector> solution_;
};

/// Consistent random affine system: A (n x d) standard normal, x* standard
/// normal, b = A x*. Requires n >= d.
AffineSystem random_affine(std::size_t n, std::size_t d, std::uint64_t seed);

/// Discretized H-equation
///   f_i(x) = x_i - 1 / T_i(x),
///   T_i(x) = 1 - (c / 2n) sum_j mu_i x_j / (mu_i + mu_j),  mu_i = (i - 1/2) / n,
/// with n = d and c in (0, 1].
class ChandrasekharH final : public ResidualSystem {
 public:
  ChandrasekharH(std::size_t n, double c);

  std::size_t components() const override { return n_; }
  std::size_t dimension() const override { return n_; }
  double value(std::size_t i, const Vector& x) const override;
  Vector gradient(std::size_t i, const Vector& x) const override;
  void evaluate(std::span<const std::size_t> indices, const Vector& x, Eigen::Ref<Vector> values,
                Eigen::Ref<Matrix> gradients) const override;

  double c() const { return c_; }
  /// T_i(x)
  double denominator(std::size_t i, const Vector& x) const;

 private:
  std::size_t n_;
  double c_;
  double scale_;  // c / 2n
  // column i holds mu_i / (mu_i + mu_j) over j
  Matrix kernel_;
};

ChandrasekharH chandrasekhar(std::size_t n, double c);

/// f = grad l with
///   l(x) = (1/N) sum_j log(1 + exp(-b_j a_j^T x)) + theta sum_k nu x_k^2 / (1 + nu x_k^2)
/// where nu is the regularizer shape (nu_reg).
class RegLogistic final : public ResidualSystem {
 public:
  RegLogistic(LabeledDataset data, double theta, double nu_reg);

  std::size_t components() const override { return data_.dimension(); }
  std::size_t dimension() const override { return data_.dimension(); }
  double value(std::size_t i, const Vector& x) const override;
  Vector gradient(std::size_t i, const Vector& x) const override;
  void values(std::span<const std::size_t> indices, const Vector& x,
              Eigen::Ref<Vector> out) const override;
  void evaluate(std::span<const std::size_t> indices, const Vector& x, Eigen::Ref<Vector> values,
                Eigen::Ref<Matrix> gradients) const override;

  const LabeledDataset& data() const { return data_; }

 private:
  struct Weights {
    Vector first;   // -b_j sigma(-b_j a_j^T x) / N
    Vector second;  // sigma(z_j)(1 - sigma(z_j)) / N
  };
  Weights weights(const Vector& x, bool need_second) const;
  double value_from(std::size_t i, const Vector& x, const Weights& w) const;
  Vector gradient_from(std::size_t i, const Vector& x, const Weights& w) const;

  LabeledDataset data_;
  double theta_;
  double nu_reg_;
};

RegLogistic reg_logistic(LabeledDataset data, double theta = 1e-2, double nu_reg = 1.0);

/// Gaussian features, Gaussian planted separator, labels sign(a^T w) with
/// `label_noise` fraction flipped.
LabeledDataset synthetic_logistic(std::size_t samples, std::size_t d, std::uint64_t seed,
                                  double label_noise = 0.05);

/// f = grad h with
///   h(x) = mu ln sum_i exp((a_i^T x - b_i) / mu) + (lambda / 2) ||x||^2.
class SoftMaxMin final : public ResidualSystem {
 public:
  SoftMaxMin(Matrix a, Vector b, double mu_smooth, double lambda_reg);

  std::size_t components() const override { return static_cast<std::size_t>(a_.cols()); }
  std::size_t dimension() const override { return static_cast<std::size_t>(a_.cols()); }
  double value(std::size_t i, const Vector& x) const override;
  Vector gradient(std::size_t i, const Vector& x) const override;
  void values(std::span<const std::size_t> indices, const Vector& x,
              Eigen::Ref<Vector> out) const override;
  void evaluate(std::span<const std::size_t> indices, const Vector& x, Eigen::Ref<Vector> values,
                Eigen::Ref<Matrix> gradients) const override;
  /// Closed form only for a single term: x* = -a_1 / lambda.
  std::optional<Vector> known_solution() const override;

  /// h(x)
  double objective(const Vector& x) const;
  const Matrix& data() const { return a_; }

 private:
  struct Weights {
    Vector w;  // softmax((A x - b) / mu)
    Vector s;  // A^T w
  };
  Weights weights(const Vector& x) const;
  Vector gradient_from(std::size_t i, const Vector& x, const Weights& w) const;

  Matrix a_;  // N x d, row i = a_i
  Vector b_;
  double mu_;
  double lambda_;
};

/// Entries of a_1..a_N and b drawn independently from U[-1, 1].
SoftMaxMin soft_max_min(std::size_t samples, std::size_t d, double mu_smooth, double lambda_reg,
                        std::uint64_t seed);

}  // namespace ign
