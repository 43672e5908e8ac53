#pragma once

// The auxiliary rate sequence a_t(n, nu) that bounds the IGN error, its
// contraction constants, and the local convergence radius.
//
//   a_0 = 1
//   a_t = (sum_{j<t} a_j^{1+nu} + n - t) / (2 (1+nu) n),   1 <= t <= n
//   a_t = (sum_{j=t-n}^{t-1} a_j^{1+nu}) / (2 (1+nu) n),    t > n
//
// For mini-batch runs the period is m = ceil(n / k).

#include <cstddef>
#include <optional>
#include <vector>

namespace ign {

struct AuxSequence {
  std::size_t period = 1;  // n (or m for mini-batch)
  double nu = 1.0;
  std::vector<double> values;  // a_0 .. a_T

  double operator[](std::size_t t) const { return values[t]; }
  std::size_t size() const { return values.size(); }
};

/// Throws ParamOutOfRange unless n >= 1 and nu in (0, 1].
AuxSequence aux_sequence(std::size_t n, double nu, std::size_t horizon);

/// c = 1 - (1/n) (1 - (1 / (2(1+nu)))^{1+nu})
double contraction_factor(std::size_t n, double nu);

struct TheoryParams {
  double mu = 1.0;               // sigma_min(J(x*))
  double lipschitz_f = 1.0;      // L_f
  double holder_constant = 1.0;  // H_nu
  double nu = 1.0;
  std::size_t n = 1;
  std::size_t k = 1;
};

/// (mu^2 / (4 L_f H_nu n))^{1/nu} for k = 1 and
/// (mu^2 / (4 k L_f H_nu ceil(n/k)))^{1/nu} otherwise.
double convergence_radius(const TheoryParams& params);

/// r_t = a_t(n, nu) max(r0, 1), t = 0..horizon.
std::vector<double> rate_envelope(std::size_t n, double nu, double r0, std::size_t horizon);

/// Slack (bound - value) of each sequence property at index t; absent when
/// the property does not apply at t. Nonnegative slack means it holds.
struct LemmaMargins {
  double at_most_one;                       // 1 - a_t
  std::optional<double> nonincreasing;      // a_t - a_{t+1}
  std::optional<double> period_power;       // a_{t-n}^{1+nu} / (2(1+nu)) - a_t,  t >= n
  std::optional<double> linear_contraction; // c a_t - a_{t+1},  t >= n
  std::optional<double> superlinear;        // c^{(1+nu)^{floor(t/n)-1}} a_t - a_{t+1},  t >= n
};

/// Margins for every t in [0, seq.size()); properties that need a_{t+1}
/// are absent on the last index.
std::vector<LemmaMargins> lemma_margins(const AuxSequence& seq);

/// Smallest slack over all margins (including the contraction-factor
/// bracket 1 - 15/(16n) <= c < 1 - 1/(2n)).
double worst_margin(const AuxSequence& seq);

}  // namespace ign
