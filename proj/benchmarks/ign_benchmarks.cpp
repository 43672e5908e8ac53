#include <benchmark/benchmark.h>

#include <vector>

#include "ign/linalg.hpp"
#include "ign/problems.hpp"
#include "ign/random.hpp"
#include "ign/solvers.hpp"

namespace {

using namespace ign;

struct UpdateCase {
  Matrix g;
  Matrix h;
  Matrix v;
  std::vector<double> signs;
};

// Gram of a random 2d x d Jacobian; the update swaps its first k rows for
// fresh ones, as one MB-IGN step does.
UpdateCase make_update(Index d, Index k) {
  Rng rng(static_cast<std::uint64_t>(d * 1000 + k));
  const Matrix j = rng.normal_matrix(2 * d, d);
  const Matrix fresh = rng.normal_matrix(k, d);
  UpdateCase c;
  const GramInverse gi = gram_and_inverse(j);
  c.h = gi.gram;
  c.g = gi.inverse;
  c.v.resize(d, 2 * k);
  for (Index i = 0; i < k; ++i) {
    c.v.col(2 * i) = j.row(i).transpose();
    c.v.col(2 * i + 1) = fresh.row(i).transpose();
    c.signs.push_back(-1.0);
    c.signs.push_back(1.0);
  }
  return c;
}

void BM_SmwSigned(benchmark::State& state) {
  const auto c = make_update(state.range(0), state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(smw_update_signed(c.g, c.v, c.signs));
  }
}
BENCHMARK(BM_SmwSigned)->ArgsProduct({{100, 400}, {1, 10, 50}})->Unit(benchmark::kMicrosecond);

void BM_DenseReinverse(benchmark::State& state) {
  const auto c = make_update(state.range(0), state.range(1));
  Vector s(static_cast<Index>(c.signs.size()));
  for (Index i = 0; i < s.size(); ++i) s(i) = c.signs[static_cast<std::size_t>(i)];
  const Matrix updated = c.h + c.v * s.asDiagonal() * c.v.transpose();
  for (auto _ : state) {
    benchmark::DoNotOptimize(invert_spd(updated));
  }
}
BENCHMARK(BM_DenseReinverse)->ArgsProduct({{100, 400}, {1, 10, 50}})->Unit(benchmark::kMicrosecond);

// One pass over the H-equation (n = d = 200) for several batch sizes.
void BM_MbIgnPass(benchmark::State& state) {
  const std::size_t d = 200;
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto sys = chandrasekhar(d, 0.999);
  const IgnState start = init_state(sys, Vector::Ones(static_cast<Index>(d)), k);
  for (auto _ : state) {
    IgnState s = start;
    for (std::size_t b = 0; b < s.blocks(); ++b) advance(s, sys);
    benchmark::DoNotOptimize(s.x.data());
  }
}
BENCHMARK(BM_MbIgnPass)->Arg(1)->Arg(10)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_GaussNewtonStep(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto sys = chandrasekhar(d, 0.999);
  const Vector x = Vector::Ones(static_cast<Index>(d));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gn_step(x, sys));
  }
}
BENCHMARK(BM_GaussNewtonStep)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_EkfSPass(benchmark::State& state) {
  const std::size_t d = 200;
  const auto sys = chandrasekhar(d, 0.999);
  const EkfState start = init_ekf_state(sys, Vector::Ones(static_cast<Index>(d)));
  for (auto _ : state) {
    EkfState s = start;
    for (std::size_t i = 0; i < d; ++i) s = ekfs_step(std::move(s), sys, 0.5, 1.0);
    benchmark::DoNotOptimize(s.x.data());
  }
}
BENCHMARK(BM_EkfSPass)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
