#include "ign/solvers.hpp"

#include <sstream>

#include "ign/error.hpp"

namespace ign {

std::vector<IndexBlock> make_partition(std::size_t n, std::size_t k) {
  if (k < 1 || k > n) {
    std::ostringstream os;
    os << "batch size k = " << k << " must satisfy 1 <= k <= n = " << n;
    fail(ErrorCode::ParamOutOfRange, os.str());
  }
  std::vector<IndexBlock> blocks;
  blocks.reserve((n + k - 1) / k);
  for (std::size_t begin = 0; begin < n; begin += k) {
    blocks.push_back({begin, std::min(begin + k, n)});
  }
  return blocks;
}

IgnState init_state(const ResidualSystem& sys, const Vector& x0, std::size_t k) {
  check_point(sys, x0);
  IgnState s;
  s.partition = make_partition(sys.components(), k);

  Vector values;
  full_evaluate(sys, x0, values, s.anchor_gradients);
  GramInverse gi = gram_and_inverse_from_columns(s.anchor_gradients);
  s.h = std::move(gi.gram);
  s.g = std::move(gi.inverse);
  s.anchor_offsets = s.anchor_gradients.transpose() * x0 - values;
  s.u = s.anchor_gradients * s.anchor_offsets;
  s.x = x0;
  s.anchors.assign(s.partition.size(), x0);
  s.t = 0;
  return s;
}

void advance(IgnState& state, const ResidualSystem& sys) {
  const Index d = state.x.size();
  Vector x_next = state.g * state.u;
  if (!all_finite(x_next)) fail(ErrorCode::NonFinite, "iterate became non-finite");

  const std::size_t block = state.next_block();
  const IndexBlock range = state.partition[block];
  const auto kb = static_cast<Index>(range.size());
  const auto begin = static_cast<Index>(range.begin);
  const auto idx = index_range(range.begin, range.end);

  Vector values(kb);
  Matrix fresh(d, kb);
  sys.evaluate(idx, x_next, values, fresh);

  // [g_j1(z), g_j1(x'), g_j2(z), g_j2(x'), ...] with U = V diag(-1, +1, ...)
  Matrix v(d, 2 * kb);
  std::vector<double> signs(static_cast<std::size_t>(2 * kb));
  for (Index r = 0; r < kb; ++r) {
    v.col(2 * r) = state.anchor_gradients.col(begin + r);
    v.col(2 * r + 1) = fresh.col(r);
    signs[static_cast<std::size_t>(2 * r)] = -1.0;
    signs[static_cast<std::size_t>(2 * r + 1)] = 1.0;
  }
  Matrix g_next = smw_update_signed(state.g, v, signs);

  // Nothing below throws; commit.
  const Vector fresh_offsets = fresh.transpose() * x_next - values;
  auto stale = state.anchor_gradients.middleCols(begin, kb);
  auto stale_offsets = state.anchor_offsets.segment(begin, kb);

  state.u.noalias() -= stale * stale_offsets;
  state.u.noalias() += fresh * fresh_offsets;

  state.h.selfadjointView<Eigen::Lower>().rankUpdate(stale, -1.0);
  state.h.selfadjointView<Eigen::Lower>().rankUpdate(fresh, 1.0);
  symmetrize_from_lower(state.h);

  state.g = std::move(g_next);
  stale = fresh;
  stale_offsets = fresh_offsets;
  state.anchors[block] = x_next;
  state.x = std::move(x_next);
  ++state.t;
}

IgnState mbign_step(IgnState state, const ResidualSystem& sys) {
  advance(state, sys);
  return state;
}

IgnState ign_step(IgnState state, const ResidualSystem& sys) {
  if (state.batch_size() != 1) fail(ErrorCode::ParamOutOfRange, "IGN state must use k = 1");
  advance(state, sys);
  return state;
}

void refresh(IgnState& state) {
  GramInverse gi = gram_and_inverse_from_columns(state.anchor_gradients);
  state.h = std::move(gi.gram);
  state.g = std::move(gi.inverse);
  state.u = state.anchor_gradients * state.anchor_offsets;
}

std::pair<Matrix, Vector> recompute_aggregates(const IgnState& state, const ResidualSystem& sys) {
  const Index d = state.x.size();
  Matrix h = Matrix::Zero(d, d);
  Vector u = Vector::Zero(d);
  for (std::size_t b = 0; b < state.partition.size(); ++b) {
    const Vector& z = state.anchors[b];
    for (std::size_t j = state.partition[b].begin; j < state.partition[b].end; ++j) {
      const Vector gj = sys.gradient(j, z);
      const double fj = sys.value(j, z);
      h += gj * gj.transpose();
      u += (gj.dot(z) - fj) * gj;
    }
  }
  return {h, u};
}

Vector gn_step(const Vector& x, const ResidualSystem& sys) {
  Vector values;
  Matrix gradients;
  full_evaluate(sys, x, values, gradients);
  const Index d = gradients.rows();
  if (gradients.cols() < d) fail(ErrorCode::SingularGram, "fewer components than unknowns");
  Matrix h = Matrix::Zero(d, d);
  h.selfadjointView<Eigen::Lower>().rankUpdate(gradients);
  symmetrize_from_lower(h);
  const Vector rhs = gradients * values;
  try {
    return x - solve_spd(h, rhs);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotSPD) fail(ErrorCode::SingularGram, e.what());
    throw;
  }
}

EkfState init_ekf_state(const ResidualSystem& sys, const Vector& x0) {
  Vector values;
  Matrix gradients;
  full_evaluate(sys, x0, values, gradients);
  const Index d = gradients.rows();
  EkfState s;
  s.x = x0;
  s.h = Matrix::Zero(d, d);
  s.h.selfadjointView<Eigen::Lower>().rankUpdate(gradients);
  symmetrize_from_lower(s.h);
  if (Eigen::LLT<Matrix>(s.h).info() != Eigen::Success) {
    fail(ErrorCode::SingularGram, "initial Gram estimate is not positive definite");
  }
  return s;
}

EkfState ekfs_step(EkfState state, const ResidualSystem& sys, double alpha, double lambda) {
  const std::size_t n = sys.components();
  const Index d = state.x.size();
  const std::size_t i = static_cast<std::size_t>(state.t % n);
  const std::size_t idx[1] = {i};

  Vector value(1);
  Matrix grad(d, 1);
  sys.evaluate(idx, state.x, value, grad);
  Vector direction;
  try {
    direction = solve_spd(state.h, grad.col(0) * value(0));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotSPD) fail(ErrorCode::SingularGram, e.what());
    throw;
  }
  state.x -= alpha * direction;
  if (!all_finite(state.x)) fail(ErrorCode::NonFinite, "iterate became non-finite");

  sys.evaluate(idx, state.x, value, grad);
  state.h *= lambda;
  state.h.selfadjointView<Eigen::Lower>().rankUpdate(grad.col(0), 1.0);
  symmetrize_from_lower(state.h);
  ++state.t;
  return state;
}

double EkfSchedule::alpha(std::uint64_t t, std::size_t n) const {
  if (fixed_step) return 1.0;
  const std::uint64_t passes = (t + n - 1) / n;  // ceil(t / n)
  return step_scale / (static_cast<double>(passes) + 1.0);
}

}  // namespace ign
