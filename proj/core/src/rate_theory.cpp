#include "ign/rate_theory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ign/error.hpp"

namespace ign {

namespace {

void require_params(std::size_t n, double nu) {
  if (n < 1) fail(ErrorCode::ParamOutOfRange, "period n must be >= 1");
  if (!(nu > 0.0 && nu <= 1.0)) {
    std::ostringstream os;
    os << "Holder exponent nu = " << nu << " outside (0, 1]";
    fail(ErrorCode::ParamOutOfRange, os.str());
  }
}

}  // namespace

AuxSequence aux_sequence(std::size_t n, double nu, std::size_t horizon) {
  require_params(n, nu);
  AuxSequence seq;
  seq.period = n;
  seq.nu = nu;
  seq.values.resize(horizon + 1);
  std::vector<double> powered(horizon + 1);
  const double denom = 2.0 * (1.0 + nu) * static_cast<double>(n);

  seq.values[0] = 1.0;
  powered[0] = 1.0;
  for (std::size_t t = 1; t <= horizon; ++t) {
    double sum = 0.0;
    if (t <= n) {
      for (std::size_t j = 0; j < t; ++j) sum += powered[j];
      sum += static_cast<double>(n - t);
    } else {
      for (std::size_t j = t - n; j < t; ++j) sum += powered[j];
    }
    seq.values[t] = sum / denom;
    powered[t] = std::pow(seq.values[t], 1.0 + nu);
  }
  return seq;
}

double contraction_factor(std::size_t n, double nu) {
  require_params(n, nu);
  const double base = 1.0 / (2.0 * (1.0 + nu));
  return 1.0 - (1.0 - std::pow(base, 1.0 + nu)) / static_cast<double>(n);
}

double convergence_radius(const TheoryParams& p) {
  require_params(p.n, p.nu);
  if (!(p.mu > 0.0 && p.lipschitz_f > 0.0 && p.holder_constant > 0.0)) {
    fail(ErrorCode::ParamOutOfRange, "mu, L_f and H_nu must be positive");
  }
  if (p.k < 1 || p.k > p.n) fail(ErrorCode::ParamOutOfRange, "batch size must satisfy 1 <= k <= n");
  const double blocks = static_cast<double>((p.n + p.k - 1) / p.k);
  const double scale = static_cast<double>(p.k) * blocks;  // k ceil(n/k), = n when k = 1
  const double inner = p.mu * p.mu / (4.0 * p.lipschitz_f * p.holder_constant * scale);
  return std::pow(inner, 1.0 / p.nu);
}

std::vector<double> rate_envelope(std::size_t n, double nu, double r0, std::size_t horizon) {
  if (!(r0 >= 0.0)) fail(ErrorCode::ParamOutOfRange, "r0 must be nonnegative");
  const AuxSequence seq = aux_sequence(n, nu, horizon);
  const double scale = std::max(r0, 1.0);
  std::vector<double> out(seq.values.size());
  std::transform(seq.values.begin(), seq.values.end(), out.begin(),
                 [scale](double a) { return a * scale; });
  return out;
}

std::vector<LemmaMargins> lemma_margins(const AuxSequence& seq) {
  const std::size_t n = seq.period;
  const double nu = seq.nu;
  const double c = contraction_factor(n, nu);
  const double half_inv = 1.0 / (2.0 * (1.0 + nu));
  std::vector<LemmaMargins> out(seq.size());
  for (std::size_t t = 0; t < seq.size(); ++t) {
    LemmaMargins& m = out[t];
    const double a = seq[t];
    m.at_most_one = 1.0 - a;
    const bool has_next = t + 1 < seq.size();
    if (has_next) m.nonincreasing = a - seq[t + 1];
    if (t >= n) {
      m.period_power = half_inv * std::pow(seq[t - n], 1.0 + nu) - a;
      if (has_next) {
        m.linear_contraction = c * a - seq[t + 1];
        const double exponent = std::pow(1.0 + nu, static_cast<double>(t / n) - 1.0);
        m.superlinear = std::pow(c, exponent) * a - seq[t + 1];
      }
    }
  }
  return out;
}

double worst_margin(const AuxSequence& seq) {
  const std::size_t n = seq.period;
  const double c = contraction_factor(n, seq.nu);
  const double nd = static_cast<double>(n);
  // 1 - 15/(16n) <= c and c < 1 - 1/(2n); the strict side is reported as-is
  // and checked separately by callers that need strictness.
  double worst = std::min(c - (1.0 - 15.0 / (16.0 * nd)), (1.0 - 1.0 / (2.0 * nd)) - c);
  for (const LemmaMargins& m : lemma_margins(seq)) {
    worst = std::min(worst, m.at_most_one);
    for (const auto& opt : {m.nonincreasing, m.period_power, m.linear_contraction, m.superlinear}) {
      if (opt) worst = std::min(worst, *opt);
    }
  }
  return worst;
}

}  // namespace ign
