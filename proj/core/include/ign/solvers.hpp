#pragma once

// Step functions for the incremental Gauss-Newton family (IGN, MB-IGN) and
// the baselines (vanilla Gauss-Newton, EKF / EKF with stepsize).
//
// Indices are 0-based throughout: block i_t = t mod m, where the 1-based
// form is i_t = t % m + 1.

#include <cstdint>
#include <utility>
#include <vector>

#include "ign/residual_system.hpp"

namespace ign {

/// Half-open block [begin, end) of component indices.
struct IndexBlock {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool operator==(const IndexBlock&) const = default;
};

/// m = ceil(n / k) contiguous blocks; all but the last have exactly k
/// members. Throws ParamOutOfRange unless 1 <= k <= n.
std::vector<IndexBlock> make_partition(std::size_t n, std::size_t k);

/// Iterate bundle of MB-IGN (IGN is the k = 1 case).
///
/// With z_b the anchor of block b and b(j) the block holding component j,
///   H = sum_j g_j(z_b(j)) g_j(z_b(j))^T
///   u = sum_j (g_j(z_b(j))^T z_b(j) - f_j(z_b(j))) g_j(z_b(j))
///   G ~ H^{-1}
/// The gradients and offsets at the anchors are cached so that a step only
/// evaluates the components of one block, at the new iterate.
struct IgnState {
  std::uint64_t t = 0;
  Vector x;
  Vector u;
  Matrix h;
  Matrix g;
  std::vector<Vector> anchors;       // one per block
  std::vector<IndexBlock> partition;
  Matrix anchor_gradients;           // d x n, column j = g_j(z_b(j))
  Vector anchor_offsets;             // n, g_j^T z - f_j at the anchor

  std::size_t blocks() const { return partition.size(); }
  std::size_t batch_size() const { return partition.empty() ? 0 : partition.front().size(); }
  /// Block updated by the next step.
  std::size_t next_block() const { return static_cast<std::size_t>(t % partition.size()); }
};

/// All anchors at x0; H, G from J(x0); u from the aggregate identity.
/// Evaluates every component once at x0. Throws SingularGram.
IgnState init_state(const ResidualSystem& sys, const Vector& x0, std::size_t k);

/// One MB-IGN iteration in place:
///   x' = G u;  b = t mod m;
///   swap block b's contribution at the old anchor for one at x';
///   G updated by Sherman-Morrison-Woodbury with the 2|S_b| columns
///   [g_j(z_b), g_j(x')] (signs -, +);  z_b = x';  t += 1.
/// Strong exception guarantee: on InnerMatrixSingular the state is
/// unchanged (the block was still evaluated at x').
void advance(IgnState& state, const ResidualSystem& sys);

/// Value-semantics wrapper around advance().
IgnState mbign_step(IgnState state, const ResidualSystem& sys);

/// IGN step: identical to mbign_step on a state built with k = 1.
IgnState ign_step(IgnState state, const ResidualSystem& sys);

/// Rebuild H and u from the cached anchor data and G by direct inversion.
/// Throws SingularGram.
void refresh(IgnState& state);

/// Recompute (H, u) from scratch by evaluating sys at every anchor. Used by
/// tests and diagnostics as an independent check of the maintained values.
std::pair<Matrix, Vector> recompute_aggregates(const IgnState& state, const ResidualSystem& sys);

/// x' = x - (J^T J)^{-1} J^T f. Throws SingularGram.
Vector gn_step(const Vector& x, const ResidualSystem& sys);

struct EkfState {
  std::uint64_t t = 0;
  Vector x;
  Matrix h;  // recursive Gram estimate
};

/// H~0 = J(x0)^T J(x0). Throws SingularGram.
EkfState init_ekf_state(const ResidualSystem& sys, const Vector& x0);

/// i = t mod n;  x' = x - alpha H~^{-1} g_i(x) f_i(x);
/// H~' = lambda H~ + g_i(x') g_i(x')^T;  t += 1.
/// Throws SingularGram when H~ is not positive definite.
EkfState ekfs_step(EkfState state, const ResidualSystem& sys, double alpha, double lambda);

/// EKF / EKF-S schedules. EKF uses alpha_t = 1; EKF-S uses
/// alpha_t = a / (ceil(t / n) + 1). lambda_t is constant.
struct EkfSchedule {
  double step_scale = 1.0;  // a
  double forgetting = 1.0;  // lambda
  bool fixed_step = false;  // true for plain EKF

  double alpha(std::uint64_t t, std::size_t n) const;
  double lambda(std::uint64_t) const { return forgetting; }
};

}  // namespace ign
