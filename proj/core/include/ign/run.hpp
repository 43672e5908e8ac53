#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ign/error.hpp"
#include "ign/solvers.hpp"

namespace ign {

enum class Method { Ign, MbIgn, Gn, Ekf, EkfS };

std::string_view to_string(Method m);
/// Accepts ign, mb-ign, gn, ekf, ekf-s (case-insensitive). Throws ParamOutOfRange.
Method parse_method(std::string_view name);

struct SolverConfig {
  std::size_t batch_size = 1;  // k, MB-IGN only
  double tol = 1e-10;          // stop when ||f(x)|| <= tol
  double max_epochs = 100.0;
  std::size_t refresh_period = 5;  // full passes between forced refreshes
  double drift_tol = 1e-6;         // refresh when max|G H - I| exceeds this
  std::uint64_t seed = 0;
  EkfSchedule ekf{};
  /// Record sigma_min(H) at pass boundaries when d is at most this.
  std::size_t sigma_min_max_dimension = 400;
  /// Used for error_norm when the system has no known solution.
  std::optional<Vector> reference_solution;

  void validate() const;
};

/// One sample of a run. `epoch` counts component-gradient evaluations
/// needed to produce the current iterate, divided by n.
struct TraceRecord {
  std::uint64_t t = 0;
  double epoch = 0.0;
  double elapsed_seconds = 0.0;
  double residual_norm = 0.0;
  std::optional<double> error_norm;
  std::optional<double> gram_sigma_min;  // IGN family only, diagnostic
};

struct RunResult {
  Method method = Method::Ign;
  std::vector<TraceRecord> trace;
  Vector x;
  bool converged = false;
  std::size_t refreshes = 0;
  std::size_t steps = 0;

  const TraceRecord& final_record() const { return trace.back(); }
};

/// Solver failure during run(); carries the trace collected so far.
class RunError : public Error {
 public:
  RunError(ErrorCode code, const std::string& message, RunResult partial)
      : Error(code, message), partial_(std::move(partial)) {}

  const RunResult& partial() const { return partial_; }

 private:
  RunResult partial_;
};

/// Iterate `method` from x0 until ||f(x)|| <= tol or the epoch budget is
/// spent. A record is taken at t = 0, at every full pass boundary and at
/// termination. For the IGN family a refresh runs every `refresh_period`
/// passes and whenever the measured inverse drift exceeds `drift_tol`; an
/// InnerMatrixSingular step is retried once after a refresh.
///
/// Epoch accounting: gradients evaluated at x^{t+1} inside an incremental
/// step only serve x^{t+2}, so x^{t+1} is charged the evaluations made
/// before it was formed. This makes MB-IGN with k = n and GN charge one
/// epoch per iterate. The residual norm logged in the trace is not charged.
RunResult run(Method method, const ResidualSystem& sys, const SolverConfig& config,
              const Vector& x0);

}  // namespace ign
