#include "ign/run.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <sstream>

namespace ign {

namespace {

constexpr double kEpochSlack = 1e-12;

class Runner {
 public:
  Runner(Method method, const ResidualSystem& sys, const SolverConfig& config)
      : sys_(sys), counted_(sys), config_(config), n_(sys.components()),
        start_(std::chrono::steady_clock::now()) {
    result_.method = method;
    if (auto known = sys.known_solution()) {
      x_star_ = std::move(known);
    } else if (config.reference_solution) {
      x_star_ = config.reference_solution;
    }
  }

  RunResult execute(const Vector& x0) {
    result_.x = x0;
    if (record(0, 0.0, x0)) return finish();
    if (config_.max_epochs <= 0.0) return finish();
    try {
      switch (result_.method) {
        case Method::Ign: run_incremental(x0, 1); break;
        case Method::MbIgn: run_incremental(x0, config_.batch_size); break;
        case Method::Gn: run_gauss_newton(x0); break;
        case Method::Ekf:
        case Method::EkfS: run_ekf(x0); break;
      }
    } catch (const RunError&) {
      throw;
    } catch (const Error& e) {
      std::ostringstream os;
      os << to_string(result_.method) << " failed after " << result_.steps << " steps: " << e.what();
      throw RunError(e.code(), os.str(), result_);
    }
    return finish();
  }

 private:
  double evals() const { return static_cast<double>(counted_.counters().gradient_evals); }
  double epoch_of(double gradient_evals) const { return gradient_evals / static_cast<double>(n_); }
  bool within_budget(double projected_evals) const {
    return epoch_of(projected_evals) <= config_.max_epochs + kEpochSlack;
  }

  // Appends a record; returns true when x meets the tolerance.
  bool record(std::uint64_t t, double epoch, const Vector& x,
              std::optional<double> sigma_min = std::nullopt) {
    TraceRecord r;
    r.t = t;
    r.epoch = epoch;
    r.residual_norm = full_residual(sys_, x).norm();
    if (x_star_) r.error_norm = (x - *x_star_).norm();
    r.gram_sigma_min = sigma_min;
    r.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    if (!result_.trace.empty() && result_.trace.back().t == t) {
      result_.trace.back() = r;
    } else {
      result_.trace.push_back(r);
    }
    result_.x = x;
    if (!std::isfinite(r.residual_norm)) {
      throw RunError(ErrorCode::NonFinite, "residual became non-finite", result_);
    }
    result_.converged = r.residual_norm <= config_.tol;
    return result_.converged;
  }

  // Residual check between records; only materializes a record on success.
  bool converged_at(std::uint64_t t, double epoch, const Vector& x) {
    const double norm = full_residual(sys_, x).norm();
    if (!std::isfinite(norm)) return record(t, epoch, x);
    if (norm <= config_.tol) return record(t, epoch, x);
    result_.x = x;
    return false;
  }

  void run_incremental(const Vector& x0, std::size_t k) {
    if (!within_budget(static_cast<double>(n_))) return;
    IgnState state = init_state(counted_, x0, k);
    const std::size_t m = state.blocks();
    const Index d = x0.size();
    double iterate_charge = evals();

    while (true) {
      const double charged = evals();
      if (!within_budget(charged)) break;
      try {
        advance(state, counted_);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::InnerMatrixSingular) throw;
        refresh(state);
        ++result_.refreshes;
        try {
          advance(state, counted_);
        } catch (const Error& again) {
          if (again.code() != ErrorCode::InnerMatrixSingular) throw;
          std::ostringstream os;
          os << "inner matrix singular at t = " << state.t << " even after refresh: " << again.what();
          throw RunError(again.code(), os.str(), result_);
        }
      }
      ++result_.steps;
      iterate_charge = charged;
      const double epoch = epoch_of(charged);

      if (state.t % m == 0) {
        const std::uint64_t passes = state.t / m;
        if (passes % config_.refresh_period == 0 || inverse_drift(state.g, state.h) > config_.drift_tol) {
          refresh(state);
          ++result_.refreshes;
        }
        std::optional<double> sigma;
        if (static_cast<std::size_t>(d) <= config_.sigma_min_max_dimension) {
          sigma = smallest_singular_value(state.h);
        }
        if (record(state.t, epoch, state.x, sigma)) return;
      } else if (converged_at(state.t, epoch, state.x)) {
        return;
      }
    }
    if (result_.trace.back().t != state.t) record(state.t, epoch_of(iterate_charge), state.x);
  }

  void run_gauss_newton(const Vector& x0) {
    Vector x = x0;
    std::uint64_t t = 0;
    while (within_budget(evals() + static_cast<double>(n_))) {
      x = gn_step(x, counted_);
      ++t;
      ++result_.steps;
      if (record(t, epoch_of(evals()), x)) return;
    }
  }

  void run_ekf(const Vector& x0) {
    if (!within_budget(static_cast<double>(n_) + 1.0)) return;
    EkfSchedule schedule = config_.ekf;
    if (result_.method == Method::Ekf) schedule.fixed_step = true;
    EkfState state = init_ekf_state(counted_, x0);

    while (within_budget(evals() + 1.0)) {
      const double charged = evals() + 1.0;
      state = ekfs_step(std::move(state), counted_, schedule.alpha(state.t, n_),
                        schedule.lambda(state.t));
      ++result_.steps;
      const double epoch = epoch_of(charged);
      if (state.t % n_ == 0) {
        if (record(state.t, epoch, state.x)) return;
      } else if (converged_at(state.t, epoch, state.x)) {
        return;
      }
    }
    if (result_.trace.back().t != state.t) {
      record(state.t, epoch_of(evals() - 1.0), state.x);
    }
  }

  RunResult finish() { return std::move(result_); }

  const ResidualSystem& sys_;
  CountingSystem counted_;
  const SolverConfig& config_;
  std::size_t n_;
  std::chrono::steady_clock::time_point start_;
  std::optional<Vector> x_star_;
  RunResult result_;
};

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Ign: return "ign";
    case Method::MbIgn: return "mb-ign";
    case Method::Gn: return "gn";
    case Method::Ekf: return "ekf";
    case Method::EkfS: return "ekf-s";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  std::replace(lower.begin(), lower.end(), '_', '-');
  if (lower == "ign") return Method::Ign;
  if (lower == "mb-ign" || lower == "mbign") return Method::MbIgn;
  if (lower == "gn") return Method::Gn;
  if (lower == "ekf") return Method::Ekf;
  if (lower == "ekf-s" || lower == "ekfs") return Method::EkfS;
  fail(ErrorCode::ParamOutOfRange, "unknown method '" + std::string(name) + "'");
}

void SolverConfig::validate() const {
  if (!(tol > 0.0)) fail(ErrorCode::ParamOutOfRange, "tol must be positive");
  if (refresh_period < 1) fail(ErrorCode::ParamOutOfRange, "refresh_period must be >= 1");
  if (!(drift_tol > 0.0 && drift_tol < 1.0)) fail(ErrorCode::ParamOutOfRange, "drift_tol must be in (0, 1)");
  if (batch_size < 1) fail(ErrorCode::ParamOutOfRange, "batch size must be >= 1");
  if (std::isnan(max_epochs)) fail(ErrorCode::ParamOutOfRange, "max_epochs is NaN");
  if (!(ekf.step_scale > 0.0)) fail(ErrorCode::ParamOutOfRange, "EKF step scale must be positive");
  if (!(ekf.forgetting > 0.0 && ekf.forgetting <= 1.0)) {
    fail(ErrorCode::ParamOutOfRange, "EKF forgetting factor must be in (0, 1]");
  }
}

RunResult run(Method method, const ResidualSystem& sys, const SolverConfig& config,
              const Vector& x0) {
  config.validate();
  check_point(sys, x0);
  if (method == Method::MbIgn && config.batch_size > sys.components()) {
    fail(ErrorCode::ParamOutOfRange, "batch size exceeds the number of components");
  }
  Runner runner(method, sys, config);
  return runner.execute(x0);
}

}  // namespace ign
