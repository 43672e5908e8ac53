#include <cmath>
#include <cstdlib>

#include "ign/error.hpp"
#include "ign/libsvm.hpp"
#include "ign/problems.hpp"
#include "ign/random.hpp"
#include "ign_bench/bench.hpp"

namespace ign::bench {

namespace {

std::size_t or_default(std::size_t value, std::size_t fallback) {
  return value == 0 ? fallback : value;
}

}  // namespace

std::unique_ptr<ResidualSystem> make_problem(const ProblemSpec& spec, std::uint64_t seed) {
  if (spec.name == "chandrasekhar") {
    return std::make_unique<ChandrasekharH>(or_default(spec.d, 50), spec.c);
  }
  if (spec.name == "affine") {
    const std::size_t d = or_default(spec.d, 20);
    return std::make_unique<AffineSystem>(random_affine(or_default(spec.samples, 2 * d), d, seed));
  }
  if (spec.name == "logistic") {
    LabeledDataset data;
    if (!spec.data_path.empty()) {
      std::optional<std::size_t> dim;
      if (spec.d != 0) dim = spec.d;
      data = load_libsvm(spec.data_path, dim);
    } else {
      // N = 10 d keeps the synthetic data non-separable, so a root exists
      const std::size_t d = or_default(spec.d, 50);
      data = synthetic_logistic(or_default(spec.samples, 10 * d), d, seed, spec.label_noise);
    }
    return std::make_unique<RegLogistic>(std::move(data), spec.theta, spec.nu_reg);
  }
  if (spec.name == "softmax") {
    const std::size_t d = or_default(spec.d, 50);
    return std::make_unique<SoftMaxMin>(
        soft_max_min(or_default(spec.samples, d), d, spec.mu_smooth, spec.lambda_reg, seed));
  }
  fail(ErrorCode::ParamOutOfRange,
       "unknown problem '" + spec.name + "' (chandrasekhar, affine, logistic, softmax)");
}

Vector make_x0(std::string_view policy, const ProblemSpec& problem, std::size_t d,
               std::uint64_t seed) {
  const auto n = static_cast<Index>(d);
  if (policy == "default") {
    return problem.name == "chandrasekhar" ? Vector::Ones(n) : Vector::Zero(n);
  }
  if (policy == "ones") return Vector::Ones(n);
  if (policy == "zeros") return Vector::Zero(n);
  if (policy == "random") {
    // offset so x0 does not reuse the problem's data stream
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    return rng.uniform_vector(n, -1.0, 1.0);
  }
  if (policy.starts_with("const:")) {
    const std::string text(policy.substr(6));
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (!text.empty() && end == text.c_str() + text.size() && std::isfinite(v)) {
      return Vector::Constant(n, v);
    }
  }
  fail(ErrorCode::ParamOutOfRange,
       "bad x0 policy '" + std::string(policy) + "' (default, ones, zeros, random, const:<v>)");
}

}  // namespace ign::bench
