#include <gtest/gtest.h>

#include <cmath>

#include "ign/error.hpp"
#include "ign/rate_theory.hpp"
#include "oracles.hpp"

using namespace ign;

namespace {

constexpr double kSlack = -1e-12;
const std::size_t kPeriods[] = {1, 2, 5, 10, 25};
const double kExponents[] = {0.25, 0.5, 0.75, 1.0};

}  // namespace

TEST(AuxSequence, StartsAtOne) {
  for (std::size_t n : kPeriods) {
    for (double nu : kExponents) {
      const auto seq = aux_sequence(n, nu, 3);
      EXPECT_EQ(seq[0], 1.0);
      EXPECT_DOUBLE_EQ(seq[1], 1.0 / (2.0 * (1.0 + nu))) << "n=" << n << " nu=" << nu;
      EXPECT_EQ(seq.size(), 4u);
      EXPECT_EQ(seq.period, n);
    }
  }
}

TEST(AuxSequence, PeriodTwoHandValue) {
  const auto seq = aux_sequence(2, 1.0, 10);
  EXPECT_DOUBLE_EQ(seq[2], 17.0 / 128.0);
}

TEST(AuxSequence, PeriodOneClosedForm) {
  // a_{t+1} = a_t^2 / 4 with a_0 = 1 gives a_t = (1/4)^{2^t - 1}
  const auto seq = aux_sequence(1, 1.0, 6);
  for (std::size_t t = 0; t <= 6; ++t) {
    const double expected = std::pow(0.25, std::pow(2.0, static_cast<double>(t)) - 1.0);
    EXPECT_NEAR(seq[t], expected, 1e-15 * expected) << "t=" << t;
  }
}

TEST(AuxSequence, MatchesExtendedPrecisionRecurrence) {
  for (std::size_t n : kPeriods) {
    for (double nu : kExponents) {
      const auto seq = aux_sequence(n, nu, 12 * n);
      const auto ref = oracle::rate_sequence(n, nu, 12 * n);
      for (std::size_t t = 0; t < ref.size(); ++t) {
        ASSERT_NEAR(seq[t], ref[t], 1e-13 * ref[t] + 1e-300) << "n=" << n << " nu=" << nu << " t=" << t;
      }
    }
  }
}

TEST(AuxSequence, RejectsBadParameters) {
  EXPECT_THROW(aux_sequence(0, 1.0, 5), Error);
  EXPECT_THROW(aux_sequence(2, 0.0, 5), Error);
  EXPECT_THROW(aux_sequence(2, 1.5, 5), Error);
  EXPECT_NO_THROW(aux_sequence(2, 1.0, 0));
}

// Lemma-level properties over the whole grid, checked directly from the
// values rather than through lemma_margins.
TEST(AuxSequence, PropertyGrid) {
  for (std::size_t n : kPeriods) {
    for (double nu : kExponents) {
      const std::size_t horizon = 12 * n;
      const auto a = aux_sequence(n, nu, horizon);
      const double c = contraction_factor(n, nu);
      const double p = 1.0 + nu;
      for (std::size_t t = 0; t <= horizon; ++t) {
        ASSERT_GE(a[t], 0.0);  // n = 1 underflows to zero well before t = 12
        ASSERT_LE(a[t] - 1.0, -kSlack);
        if (t < horizon) ASSERT_GE(a[t] - a[t + 1], kSlack) << "n=" << n << " nu=" << nu;
        if (t >= n) {
          ASSERT_GE(std::pow(a[t - n], p) / (2.0 * p) - a[t], kSlack);
          if (t < horizon) {
            ASSERT_GE(c * a[t] - a[t + 1], kSlack);
            const double e = std::pow(p, std::floor(static_cast<double>(t) / n) - 1.0);
            ASSERT_GE(std::pow(c, e) * a[t] - a[t + 1], kSlack) << "n=" << n << " nu=" << nu;
          }
        }
      }
    }
  }
}

TEST(LemmaMargins, AllNonNegativeOnGrid) {
  for (std::size_t n : kPeriods) {
    for (double nu : kExponents) {
      const auto seq = aux_sequence(n, nu, 12 * n);
      EXPECT_GE(worst_margin(seq), kSlack) << "n=" << n << " nu=" << nu;
      const auto margins = lemma_margins(seq);
      ASSERT_EQ(margins.size(), seq.size());
      EXPECT_FALSE(margins.back().nonincreasing.has_value());
      EXPECT_FALSE(margins[0].period_power.has_value());
      EXPECT_TRUE(margins[n].period_power.has_value());
    }
  }
}

TEST(LemmaMargins, DetectViolations) {
  AuxSequence bogus = aux_sequence(2, 1.0, 8);
  bogus.values[5] = bogus.values[4] * 1.5;  // breaks monotonicity
  EXPECT_LT(worst_margin(bogus), kSlack);
}

TEST(ContractionFactor, Examples) {
  EXPECT_DOUBLE_EQ(contraction_factor(1, 1.0), 1.0 / 16.0);
  EXPECT_DOUBLE_EQ(contraction_factor(4, 1.0), 1.0 - 15.0 / 64.0);
}

TEST(ContractionFactor, BracketAndRange) {
  for (std::size_t n : {1, 2, 3, 5, 10, 25, 100, 2000}) {
    for (double nu : {0.01, 0.25, 0.5, 0.75, 0.99, 1.0}) {
      const double c = contraction_factor(n, nu);
      const double dn = static_cast<double>(n);
      EXPECT_GT(c, 0.0);
      EXPECT_LT(c, 1.0);
      EXPECT_LT(c, 1.0 - 1.0 / (2.0 * dn));
      EXPECT_GE(c, 1.0 - 15.0 / (16.0 * dn));
      if (nu < 1.0) EXPECT_GT(c, 1.0 - 15.0 / (16.0 * dn));
    }
  }
}

TEST(ConvergenceRadius, Examples) {
  TheoryParams p{2.0, 1.0, 1.0, 1.0, 1, 1};
  EXPECT_DOUBLE_EQ(convergence_radius(p), 1.0);
  for (double nu : {0.25, 0.5, 1.0}) {
    p.nu = nu;
    EXPECT_DOUBLE_EQ(convergence_radius(p), 1.0);
  }
  // k = n: mu^2 / (4 n L H)
  TheoryParams full{3.0, 2.0, 0.5, 1.0, 6, 6};
  EXPECT_DOUBLE_EQ(convergence_radius(full), 9.0 / (4.0 * 6.0 * 2.0 * 0.5));
  // k = 4, n = 6: ceil(6/4) = 2, denominator 4 k L H ceil(n/k)
  TheoryParams mini{3.0, 2.0, 0.5, 0.5, 6, 4};
  EXPECT_DOUBLE_EQ(convergence_radius(mini), std::pow(9.0 / (4.0 * 4.0 * 2.0 * 0.5 * 2.0), 2.0));
  TheoryParams single{3.0, 2.0, 0.5, 1.0, 6, 1};
  EXPECT_DOUBLE_EQ(convergence_radius(single), 9.0 / (4.0 * 2.0 * 0.5 * 6.0));
}

TEST(ConvergenceRadius, RejectsBadParameters) {
  EXPECT_THROW(convergence_radius({0.0, 1.0, 1.0, 1.0, 1, 1}), Error);
  EXPECT_THROW(convergence_radius({1.0, 1.0, 1.0, 0.0, 1, 1}), Error);
  EXPECT_THROW(convergence_radius({1.0, 1.0, 1.0, 1.0, 3, 4}), Error);
}

TEST(RateEnvelope, ScalesWithClampedStart) {
  const auto seq = aux_sequence(3, 0.5, 20);
  const auto small = rate_envelope(3, 0.5, 0.2, 20);
  const auto big = rate_envelope(3, 0.5, 4.0, 20);
  for (std::size_t t = 0; t <= 20; ++t) {
    EXPECT_EQ(small[t], seq[t]);
    EXPECT_DOUBLE_EQ(big[t], 4.0 * seq[t]);
  }
  EXPECT_DOUBLE_EQ(rate_envelope(2, 1.0, 1.0, 2)[2], 17.0 / 128.0);
  EXPECT_THROW(rate_envelope(2, 1.0, -1.0, 2), Error);
}

TEST(RateEnvelope, PassWiseQuadraticContraction) {
  for (std::size_t n : kPeriods) {
    for (double r0 : {0.1, 0.5, 1.0}) {
      const auto r = rate_envelope(n, 1.0, r0, 12 * n);
      for (std::size_t t = n; t < r.size(); ++t) {
        ASSERT_LE(r[t], 0.25 * r[t - n] * r[t - n] * (1.0 + 1e-14)) << "n=" << n << " t=" << t;
      }
    }
  }
}
