#include <gtest/gtest.h>

#include "ign/diagnostics.hpp"
#include "ign/error.hpp"
#include "ign/problems.hpp"
#include "ign/random.hpp"
#include "ign/solvers.hpp"
#include "oracles.hpp"

using namespace ign;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an ign::Error";
  return ErrorCode::IoError;
}

std::vector<Vector> seeded_points(std::size_t d, std::uint64_t seed, std::size_t count,
                                  double lo, double hi) {
  Rng rng(seed);
  std::vector<Vector> pts;
  for (std::size_t p = 0; p < count; ++p) pts.push_back(rng.uniform_vector(static_cast<Index>(d), lo, hi));
  return pts;
}

void expect_gradients_ok(const ResidualSystem& sys, const std::vector<Vector>& pts) {
  const auto bad = check_gradients(sys, pts, 1e-5);
  EXPECT_TRUE(bad.empty()) << describe(bad.front());
}

LabeledDataset one_sample(double a, double b) {
  LabeledDataset data;
  data.features = Matrix::Constant(1, 1, a);
  data.labels = Vector::Constant(1, b);
  return data;
}

}  // namespace

TEST(Chandrasekhar, VanishingCHasUnitRoot) {
  const ChandrasekharH sys(5, 1e-14);
  EXPECT_LE(full_residual(sys, Vector::Ones(5)).cwiseAbs().maxCoeff(), 1e-13);
  const Vector f = full_residual(sys, Vector::Constant(5, 3.0));
  EXPECT_NEAR(f(2), 2.0, 1e-12);
}

TEST(Chandrasekhar, ScalarRootMatchesBisection) {
  // n = 1: mu = 1/2, T = 1 - (c/2) x (1/2) = 1 - x/8 at c = 1/2
  const ChandrasekharH sys(1, 0.5);
  const double root = oracle::bisect([](double x) { return x - 1.0 / (1.0 - x / 8.0); }, 1.0, 2.0);
  EXPECT_NEAR(root, 4.0 - 2.0 * std::sqrt(2.0), 1e-10);
  Vector x = Vector::Ones(1);
  for (int i = 0; i < 20; ++i) x = gn_step(x, sys);
  EXPECT_NEAR(x(0), root, 1e-10);
  EXPECT_NEAR(sys.denominator(0, x), 1.0 - x(0) / 8.0, 1e-15);
}

TEST(Chandrasekhar, PaperScaleConfigurationEvaluates) {
  const ChandrasekharH sys(2000, 1.0 - 1e-5);
  const Vector x = Vector::Ones(2000);
  EXPECT_TRUE(std::isfinite(sys.value(1999, x)));
  EXPECT_TRUE(sys.gradient(0, x).allFinite());
}

TEST(Chandrasekhar, RejectsBadParameters) {
  EXPECT_EQ(code_of([] { ChandrasekharH(5, 0.0); }), ErrorCode::ParamOutOfRange);
  EXPECT_EQ(code_of([] { ChandrasekharH(5, 1.5); }), ErrorCode::ParamOutOfRange);
  EXPECT_EQ(code_of([] { ChandrasekharH(0, 0.5); }), ErrorCode::ParamOutOfRange);
  EXPECT_NO_THROW(ChandrasekharH(5, 1.0));
}

TEST(Chandrasekhar, GaussNewtonFixtureConverges) {
  for (std::size_t n : {1, 5, 20, 50}) {
    for (double c : {0.1, 0.5, 0.9, 0.99}) {
      const ChandrasekharH sys(n, c);
      Vector x = Vector::Ones(static_cast<Index>(n));
      int it = 0;
      while (it < 30 && full_residual(sys, x).norm() > 1e-10) {
        x = gn_step(x, sys);
        ++it;
      }
      EXPECT_LE(full_residual(sys, x).norm(), 1e-10) << "n=" << n << " c=" << c;
    }
  }
}

TEST(Chandrasekhar, GradientsMatchFiniteDifferences) {
  for (double c : {0.5, 0.9, 1.0}) {
    const ChandrasekharH sys(12, c);
    expect_gradients_ok(sys, seeded_points(12, 20, 20, -1, 2));
  }
}

TEST(Logistic, SingleSampleAtOrigin) {
  const RegLogistic sys(one_sample(1.0, 1.0), 0.0, 1.0);
  EXPECT_DOUBLE_EQ(sys.value(0, Vector::Zero(1)), -0.5);
}

TEST(Logistic, SymmetricLabelsCancelAtOrigin) {
  LabeledDataset data;
  data.features.resize(4, 3);
  data.features << 1, 2, 3, 1, 2, 3, -0.5, 0.25, 4, -0.5, 0.25, 4;
  data.labels = Eigen::Vector4d(1, -1, -1, 1);
  const RegLogistic sys(data, 1e-2, 1.0);
  EXPECT_LE(full_residual(sys, Vector::Zero(3)).cwiseAbs().maxCoeff(), 1e-17);
}

TEST(Logistic, RegularizerDerivative) {
  // theta nu x^2 / (1 + nu x^2) has derivative 2 theta nu x / (1 + nu x^2)^2
  LabeledDataset data = one_sample(0.0, 1.0);
  const RegLogistic sys(data, 0.3, 2.0);
  const double x = 0.7;
  const double expected = 2 * 0.3 * 2.0 * x / std::pow(1 + 2.0 * x * x, 2);
  EXPECT_NEAR(sys.value(0, Vector::Constant(1, x)), expected, 1e-15);
}

TEST(Logistic, PaperConfigurationAccepted) {
  EXPECT_NO_THROW(reg_logistic(synthetic_logistic(64, 30, 1), 1e-2, 1.0));
}

TEST(Logistic, InputValidation) {
  LabeledDataset empty;
  empty.features.resize(0, 3);
  empty.labels.resize(0);
  EXPECT_EQ(code_of([&] { RegLogistic(empty, 1e-2, 1.0); }), ErrorCode::EmptyDataset);
  EXPECT_EQ(code_of([] { RegLogistic(one_sample(1.0, 0.5), 1e-2, 1.0); }), ErrorCode::BadLabel);
  LabeledDataset mismatched = one_sample(1.0, 1.0);
  mismatched.labels = Vector::Ones(2);
  EXPECT_EQ(code_of([&] { RegLogistic(mismatched, 1e-2, 1.0); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([] { RegLogistic(one_sample(1.0, 1.0), -1.0, 1.0); }), ErrorCode::ParamOutOfRange);
}

TEST(Logistic, GradientsMatchFiniteDifferences) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto sys = reg_logistic(synthetic_logistic(40, 10, seed), 1e-2, 1.0);
    expect_gradients_ok(sys, seeded_points(10, seed + 50, 20, -1, 1));
  }
}

TEST(SyntheticLogistic, DeterministicPerSeed) {
  const auto a = synthetic_logistic(50, 7, 42);
  const auto b = synthetic_logistic(50, 7, 42);
  const auto c = synthetic_logistic(50, 7, 43);
  EXPECT_EQ(a.features, b.features);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_NE(a.features, c.features);
  for (Index j = 0; j < a.labels.size(); ++j) {
    EXPECT_TRUE(a.labels(j) == 1.0 || a.labels(j) == -1.0);
  }
}

TEST(SyntheticLogistic, NoiseFlipsRoughlyTheRequestedFraction) {
  const auto clean = synthetic_logistic(4000, 5, 8, 0.0);
  const auto noisy = synthetic_logistic(4000, 5, 8, 0.05);
  ASSERT_EQ(clean.features, noisy.features);
  const double flipped = (clean.labels - noisy.labels).cwiseAbs().sum() / 2.0 / 4000.0;
  EXPECT_NEAR(flipped, 0.05, 0.015);
}

TEST(SoftMax, SingleTermHasClosedFormRoot) {
  Matrix a(1, 3);
  a << 0.5, -1, 2;
  const SoftMaxMin sys(a, Vector::Constant(1, 0.3), 2.0, 4.0);
  Rng rng(1);
  const Vector x = rng.uniform_vector(3, -1, 1);
  const Vector expected = a.row(0).transpose() + 4.0 * x;
  EXPECT_LE((full_residual(sys, x) - expected).norm(), 1e-14);
  const auto xs = sys.known_solution();
  ASSERT_TRUE(xs.has_value());
  EXPECT_LE(full_residual(sys, *xs).norm(), 1e-15);
}

TEST(SoftMax, LargeRidgeShrinksRoot) {
  const auto sys = soft_max_min(30, 10, 5.0, 1e3, 2);
  Vector x = Vector::Zero(10);
  for (int i = 0; i < 10; ++i) x = gn_step(x, sys);
  EXPECT_LE(full_residual(sys, x).norm(), 1e-12);
  EXPECT_LE(x.norm(), 1e-2 * sys.data().cwiseAbs().maxCoeff());
  EXPECT_FALSE(sys.known_solution().has_value());
}

TEST(SoftMax, ResidualIsObjectiveGradient) {
  const auto sys = soft_max_min(20, 6, 0.8, 2.0, 5);
  Rng rng(5);
  const Vector x = rng.uniform_vector(6, -1, 1);
  const Vector f = full_residual(sys, x);
  for (Index k = 0; k < 6; ++k) {
    const double h = 1e-5;
    Vector xp = x, xm = x;
    xp(k) += h;
    xm(k) -= h;
    EXPECT_NEAR(f(k), (sys.objective(xp) - sys.objective(xm)) / (2 * h), 1e-8);
  }
}

TEST(SoftMax, PaperConfigurationAccepted) {
  const auto sys = soft_max_min(2000, 2000, 5.0, 2.0, 1);
  EXPECT_EQ(sys.components(), 2000u);
  EXPECT_TRUE(std::isfinite(sys.value(0, Vector::Zero(2000))));
}

TEST(SoftMax, DataIsUniformOnSymmetricInterval) {
  const auto sys = soft_max_min(50, 40, 5.0, 2.0, 9);
  EXPECT_LE(sys.data().cwiseAbs().maxCoeff(), 1.0);
  EXPECT_NEAR(sys.data().mean(), 0.0, 0.05);
  EXPECT_EQ(code_of([] { soft_max_min(5, 5, 0.0, 1.0, 1); }), ErrorCode::ParamOutOfRange);
  EXPECT_EQ(code_of([] { soft_max_min(5, 5, 1.0, -1.0, 1); }), ErrorCode::ParamOutOfRange);
}

TEST(SoftMax, GradientsMatchFiniteDifferences) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto sys = soft_max_min(25, 10, 5.0, 2.0, seed);
    expect_gradients_ok(sys, seeded_points(10, seed + 70, 20, -1, 1));
    const auto sharp = soft_max_min(25, 10, 0.3, 2.0, seed);
    expect_gradients_ok(sharp, seeded_points(10, seed + 80, 20, -1, 1));
  }
}

TEST(Affine, MeritIsExactlyQuadratic) {
  const auto sys = random_affine(9, 4, 10);
  const Matrix& a = sys.matrix();
  Rng rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector x = rng.uniform_vector(4, -2, 2);
    const Vector y = rng.uniform_vector(4, -2, 2);
    const Vector s = y - x;
    const Vector grad = a.transpose() * full_residual(sys, x);
    const double model = merit(sys, x) + grad.dot(s) + 0.5 * (a * s).squaredNorm();
    EXPECT_NEAR(merit(sys, y), model, 1e-12 * std::max(1.0, merit(sys, y)));
  }
}

TEST(Affine, RandomFixtureIsConsistent) {
  const auto sys = random_affine(12, 5, 3);
  ASSERT_TRUE(sys.known_solution().has_value());
  EXPECT_LE(full_residual(sys, *sys.known_solution()).norm(), 1e-13);
  EXPECT_EQ(code_of([] { random_affine(3, 5, 1); }), ErrorCode::ParamOutOfRange);
  expect_gradients_ok(sys, seeded_points(5, 3, 20, -1, 1));
}

TEST(Rng, SeedDeterminesStream) {
  Rng a(5), b(5), c(6);
  const Matrix ma = a.normal_matrix(4, 4);
  EXPECT_EQ(ma, b.normal_matrix(4, 4));
  EXPECT_NE(ma, c.normal_matrix(4, 4));
  Rng u(1);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.canonical();
    ASSERT_GE(v, 0.0);
    ASSERT_LT(v, 1.0);
  }
}
