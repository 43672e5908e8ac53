#include "ign/problems.hpp"

#include <cmath>
#include <sstream>

#include "ign/error.hpp"
#include "ign/random.hpp"

namespace ign {

namespace {

void require_index(std::size_t i, std::size_t n) {
  if (i >= n) {
    std::ostringstream os;
    os << "component index " << i << " out of range for n = " << n;
    fail(ErrorCode::DimensionMismatch, os.str());
  }
}

// Numerically stable logistic sigmoid.
double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

// ---------------------------------------------------------------------------
// AffineSystem

AffineSystem::AffineSystem(Matrix a, Vector b, std::optional<Vector> solution)
    : a_(std::move(a)), b_(std::move(b)), solution_(std::move(solution)) {
  if (a_.rows() == 0 || a_.cols() == 0) fail(ErrorCode::DimensionMismatch, "empty matrix");
  if (b_.size() != a_.rows()) fail(ErrorCode::DimensionMismatch, "rhs length must equal rows of A");
  if (a_.rows() < a_.cols()) fail(ErrorCode::DimensionMismatch, "affine system needs n >= d");
  if (solution_ && solution_->size() != a_.cols()) {
    fail(ErrorCode::DimensionMismatch, "solution length must equal columns of A");
  }
}

double AffineSystem::value(std::size_t i, const Vector& x) const {
  require_index(i, components());
  return a_.row(static_cast<Index>(i)).dot(x) - b_(static_cast<Index>(i));
}

Vector AffineSystem::gradient(std::size_t i, const Vector&) const {
  require_index(i, components());
  return a_.row(static_cast<Index>(i)).transpose();
}

AffineSystem random_affine(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (d == 0 || n < d) fail(ErrorCode::ParamOutOfRange, "random_affine needs n >= d >= 1");
  Rng rng(seed);
  Matrix a = rng.normal_matrix(static_cast<Index>(n), static_cast<Index>(d));
  Vector x_star = rng.normal_matrix(static_cast<Index>(d), 1).col(0);
  Vector b = a * x_star;
  return AffineSystem(std::move(a), std::move(b), std::move(x_star));
}

// ---------------------------------------------------------------------------
// ChandrasekharH

ChandrasekharH::ChandrasekharH(std::size_t n, double c) : n_(n), c_(c) {
  if (n == 0) fail(ErrorCode::ParamOutOfRange, "H-equation needs n >= 1");
  if (!(c > 0.0 && c <= 1.0)) {
    std::ostringstream os;
    os << "H-equation parameter c = " << c << " outside (0, 1]";
    fail(ErrorCode::ParamOutOfRange, os.str());
  }
  const auto nn = static_cast<Index>(n);
  scale_ = c / (2.0 * static_cast<double>(n));
  Vector mu(nn);
  for (Index i = 0; i < nn; ++i) mu(i) = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  kernel_.resize(nn, nn);
  for (Index i = 0; i < nn; ++i)
    for (Index j = 0; j < nn; ++j) kernel_(j, i) = mu(i) / (mu(i) + mu(j));
}

double ChandrasekharH::denominator(std::size_t i, const Vector& x) const {
  require_index(i, n_);
  return 1.0 - scale_ * kernel_.col(static_cast<Index>(i)).dot(x);
}

double ChandrasekharH::value(std::size_t i, const Vector& x) const {
  const double t = denominator(i, x);
  return x(static_cast<Index>(i)) - 1.0 / t;
}

Vector ChandrasekharH::gradient(std::size_t i, const Vector& x) const {
  const double t = denominator(i, x);
  Vector g = (-scale_ / (t * t)) * kernel_.col(static_cast<Index>(i));
  g(static_cast<Index>(i)) += 1.0;
  return g;
}

void ChandrasekharH::evaluate(std::span<const std::size_t> indices, const Vector& x,
                              Eigen::Ref<Vector> values, Eigen::Ref<Matrix> gradients) const {
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const std::size_t i = indices[r];
    const auto ri = static_cast<Index>(r);
    const double t = denominator(i, x);
    values(ri) = x(static_cast<Index>(i)) - 1.0 / t;
    gradients.col(ri) = (-scale_ / (t * t)) * kernel_.col(static_cast<Index>(i));
    gradients(static_cast<Index>(i), ri) += 1.0;
  }
}

ChandrasekharH chandrasekhar(std::size_t n, double c) { return ChandrasekharH(n, c); }

// ---------------------------------------------------------------------------
// RegLogistic

RegLogistic::RegLogistic(LabeledDataset data, double theta, double nu_reg)
    : data_(std::move(data)), theta_(theta), nu_reg_(nu_reg) {
  if (data_.size() == 0) fail(ErrorCode::EmptyDataset, "logistic regression needs samples");
  if (data_.dimension() == 0) fail(ErrorCode::DimensionMismatch, "features have zero columns");
  if (data_.labels.size() != data_.features.rows()) {
    fail(ErrorCode::DimensionMismatch, "one label per sample required");
  }
  for (Index j = 0; j < data_.labels.size(); ++j) {
    const double b = data_.labels(j);
    if (b != 1.0 && b != -1.0) {
      std::ostringstream os;
      os << "label " << b << " of sample " << j << " is not -1 or +1";
      fail(ErrorCode::BadLabel, os.str());
    }
  }
  if (!(theta >= 0.0) || !(nu_reg > 0.0)) {
    fail(ErrorCode::ParamOutOfRange, "need theta >= 0 and nu_reg > 0");
  }
}

RegLogistic::Weights RegLogistic::weights(const Vector& x, bool need_second) const {
  const Vector margins = data_.features * x;
  const auto samples = margins.size();
  const double inv_n = 1.0 / static_cast<double>(samples);
  Weights w;
  w.first.resize(samples);
  if (need_second) w.second.resize(samples);
  for (Index j = 0; j < samples; ++j) {
    const double b = data_.labels(j);
    const double s = sigmoid(-b * margins(j));
    w.first(j) = -b * s * inv_n;
    if (need_second) w.second(j) = s * (1.0 - s) * inv_n;
  }
  return w;
}

double RegLogistic::value_from(std::size_t i, const Vector& x, const Weights& w) const {
  const auto k = static_cast<Index>(i);
  const double xi = x(k);
  const double q = 1.0 + nu_reg_ * xi * xi;
  return data_.features.col(k).dot(w.first) + theta_ * 2.0 * nu_reg_ * xi / (q * q);
}

Vector RegLogistic::gradient_from(std::size_t i, const Vector& x, const Weights& w) const {
  const auto k = static_cast<Index>(i);
  const double xi = x(k);
  const double q = 1.0 + nu_reg_ * xi * xi;
  Vector g = data_.features.transpose() * w.second.cwiseProduct(data_.features.col(k));
  g(k) += theta_ * 2.0 * nu_reg_ * (1.0 - 3.0 * nu_reg_ * xi * xi) / (q * q * q);
  return g;
}

double RegLogistic::value(std::size_t i, const Vector& x) const {
  require_index(i, components());
  return value_from(i, x, weights(x, false));
}

Vector RegLogistic::gradient(std::size_t i, const Vector& x) const {
  require_index(i, components());
  return gradient_from(i, x, weights(x, true));
}

void RegLogistic::values(std::span<const std::size_t> indices, const Vector& x,
                         Eigen::Ref<Vector> out) const {
  const Weights w = weights(x, false);
  for (std::size_t r = 0; r < indices.size(); ++r) {
    require_index(indices[r], components());
    out(static_cast<Index>(r)) = value_from(indices[r], x, w);
  }
}

void RegLogistic::evaluate(std::span<const std::size_t> indices, const Vector& x,
                           Eigen::Ref<Vector> values, Eigen::Ref<Matrix> gradients) const {
  const Weights w = weights(x, true);
  for (std::size_t r = 0; r < indices.size(); ++r) {
    require_index(indices[r], components());
    values(static_cast<Index>(r)) = value_from(indices[r], x, w);
    gradients.col(static_cast<Index>(r)) = gradient_from(indices[r], x, w);
  }
}

RegLogistic reg_logistic(LabeledDataset data, double theta, double nu_reg) {
  return RegLogistic(std::move(data), theta, nu_reg);
}

LabeledDataset synthetic_logistic(std::size_t samples, std::size_t d, std::uint64_t seed,
                                  double label_noise) {
  if (samples == 0 || d == 0) fail(ErrorCode::ParamOutOfRange, "need samples >= 1 and d >= 1");
  if (!(label_noise >= 0.0 && label_noise <= 1.0)) {
    fail(ErrorCode::ParamOutOfRange, "label noise must be in [0, 1]");
  }
  Rng rng(seed);
  LabeledDataset out;
  const Vector separator = rng.normal_matrix(static_cast<Index>(d), 1).col(0);
  out.features = rng.normal_matrix(static_cast<Index>(samples), static_cast<Index>(d));
  out.labels.resize(static_cast<Index>(samples));
  for (Index j = 0; j < out.labels.size(); ++j) {
    double label = out.features.row(j).dot(separator) >= 0.0 ? 1.0 : -1.0;
    if (rng.canonical() < label_noise) label = -label;
    out.labels(j) = label;
  }
  return out;
}

// ---------------------------------------------------------------------------
// SoftMaxMin

SoftMaxMin::SoftMaxMin(Matrix a, Vector b, double mu_smooth, double lambda_reg)
    : a_(std::move(a)), b_(std::move(b)), mu_(mu_smooth), lambda_(lambda_reg) {
  if (a_.rows() == 0 || a_.cols() == 0) fail(ErrorCode::ParamOutOfRange, "need N >= 1 and d >= 1");
  if (b_.size() != a_.rows()) fail(ErrorCode::DimensionMismatch, "b must have one entry per term");
  if (!(mu_ > 0.0) || !(lambda_ > 0.0)) {
    fail(ErrorCode::ParamOutOfRange, "need mu_smooth > 0 and lambda_reg > 0");
  }
}

SoftMaxMin::Weights SoftMaxMin::weights(const Vector& x) const {
  Vector r = (a_ * x - b_) / mu_;
  const double top = r.maxCoeff();
  Weights w;
  w.w = (r.array() - top).exp().matrix();
  w.w /= w.w.sum();
  w.s = a_.transpose() * w.w;
  return w;
}

Vector SoftMaxMin::gradient_from(std::size_t i, const Vector& x, const Weights& w) const {
  (void)x;
  const auto k = static_cast<Index>(i);
  Vector g = a_.transpose() * w.w.cwiseProduct(a_.col(k));
  g -= w.s(k) * w.s;
  g /= mu_;
  g(k) += lambda_;
  return g;
}

double SoftMaxMin::value(std::size_t i, const Vector& x) const {
  require_index(i, components());
  const auto k = static_cast<Index>(i);
  return weights(x).s(k) + lambda_ * x(k);
}

Vector SoftMaxMin::gradient(std::size_t i, const Vector& x) const {
  require_index(i, components());
  return gradient_from(i, x, weights(x));
}

void SoftMaxMin::values(std::span<const std::size_t> indices, const Vector& x,
                        Eigen::Ref<Vector> out) const {
  const Weights w = weights(x);
  for (std::size_t r = 0; r < indices.size(); ++r) {
    require_index(indices[r], components());
    const auto k = static_cast<Index>(indices[r]);
    out(static_cast<Index>(r)) = w.s(k) + lambda_ * x(k);
  }
}

void SoftMaxMin::evaluate(std::span<const std::size_t> indices, const Vector& x,
                          Eigen::Ref<Vector> values, Eigen::Ref<Matrix> gradients) const {
  const Weights w = weights(x);
  for (std::size_t r = 0; r < indices.size(); ++r) {
    require_index(indices[r], components());
    const auto k = static_cast<Index>(indices[r]);
    values(static_cast<Index>(r)) = w.s(k) + lambda_ * x(k);
    gradients.col(static_cast<Index>(r)) = gradient_from(indices[r], x, w);
  }
}

std::optional<Vector> SoftMaxMin::known_solution() const {
  if (a_.rows() != 1) return std::nullopt;
  return Vector(-a_.row(0).transpose() / lambda_);
}

double SoftMaxMin::objective(const Vector& x) const {
  Vector r = (a_ * x - b_) / mu_;
  const double top = r.maxCoeff();
  return mu_ * (top + std::log((r.array() - top).exp().sum())) + 0.5 * lambda_ * x.squaredNorm();
}

SoftMaxMin soft_max_min(std::size_t samples, std::size_t d, double mu_smooth, double lambda_reg,
                        std::uint64_t seed) {
  if (samples == 0 || d == 0) fail(ErrorCode::ParamOutOfRange, "need N >= 1 and d >= 1");
  Rng rng(seed);
  Matrix a = rng.uniform_matrix(static_cast<Index>(samples), static_cast<Index>(d), -1.0, 1.0);
  Vector b = rng.uniform_vector(static_cast<Index>(samples), -1.0, 1.0);
  return SoftMaxMin(std::move(a), std::move(b), mu_smooth, lambda_reg);
}

}  // namespace ign
