#pragma once

// Experiment plumbing for the ign_bench CLI: run specifications, the
// problem factory, trace output and the four subcommands.

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ign/rate_theory.hpp"
#include "ign/residual_system.hpp"
#include "ign/run.hpp"

namespace ign::bench {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitConfig = 2,
  kExitSolver = 3,
  kExitCheckFailed = 4,
};

struct ProblemSpec {
  std::string name = "chandrasekhar";  // chandrasekhar | affine | logistic | softmax
  std::size_t d = 0;        // 0: problem default
  std::size_t samples = 0;  // affine rows, logistic / softmax N; 0: problem default
  double c = 0.9;
  double theta = 1e-2;
  double nu_reg = 1.0;
  double mu_smooth = 5.0;
  double lambda_reg = 2.0;
  double label_noise = 0.05;
  std::string data_path;  // libsvm file, logistic only

  nlohmann::json to_json() const;
};

struct MethodSpec {
  Method method = Method::Ign;
  std::size_t k = 1;  // MB-IGN only
  EkfSchedule ekf{};

  /// "mb-ign:20", "gn", ...; safe as a CSV field and a file stem.
  std::string label() const;
};

/// "ign", "gn", "ekf", "ekf-s", "mb-ign:<k>". Throws ParamOutOfRange.
MethodSpec parse_method_spec(std::string_view text);

struct RunSpec {
  ProblemSpec problem;
  std::vector<MethodSpec> methods;
  std::string x0 = "default";  // default | ones | zeros | const:<v> | random
  double tol = 1e-10;
  double max_epochs = 100.0;
  std::uint64_t seed = 0;
  std::size_t refresh_period = 5;
  double drift_tol = 1e-6;
  std::filesystem::path output_dir = ".";
  std::string name = "trace";

  /// Throws ParamOutOfRange.
  void validate() const;
  SolverConfig solver_config(const MethodSpec& m) const;
};

/// Overlay the keys present in `j` onto `spec` (schema in docs/config.md).
/// Throws ParseError on unknown keys or wrong types.
void apply_json(RunSpec& spec, const nlohmann::json& j);
RunSpec load_run_spec(const std::filesystem::path& path);

/// Output directory after the IGN_BENCH_OUTPUT_DIR override.
std::filesystem::path resolve_output_dir(const std::filesystem::path& configured);

std::unique_ptr<ResidualSystem> make_problem(const ProblemSpec& spec, std::uint64_t seed);

/// Resolves the x0 policy; `default` is all-ones for the H-equation and
/// all-zeros elsewhere.
Vector make_x0(std::string_view policy, const ProblemSpec& problem, std::size_t d,
               std::uint64_t seed);

inline constexpr std::string_view kTraceHeader =
    "method,t,epoch,elapsed_seconds,residual_norm,error_norm";

/// Header plus one row per record. Numbers use %.17g so that reruns are
/// bit-comparable; elapsed_seconds is the only nondeterministic column.
void write_trace_csv(std::ostream& out, std::string_view method,
                     const std::vector<TraceRecord>& trace);

struct SummaryRow {
  std::string method;
  bool reached = false;
  std::optional<double> epochs_to_tol;
  std::optional<double> time_to_tol;
  double final_residual = 0.0;
  double budget = 0.0;  // max_epochs
  std::string error;    // non-empty when the solver failed
  std::filesystem::path trace_path;
};

struct ComparisonReport {
  std::vector<SummaryRow> rows;
  bool any_failure() const;
};

/// First record with residual <= tol, if any.
SummaryRow summarize(std::string method, const std::vector<TraceRecord>& trace, double tol,
                     double budget);

/// Fixed-width table; unreached rows show "DNF (<budget> epochs)".
void print_summary(std::ostream& out, const ComparisonReport& report);
void write_summary_csv(std::ostream& out, const ComparisonReport& report);

/// Runs the first method of `spec`, writes <name>.csv and <name>.meta.json
/// into the output directory and returns the summary row.
SummaryRow cmd_run(const RunSpec& spec, std::ostream& log);

/// Runs every method from the same x0; one CSV per method
/// (<name>_<label>.csv), <name>_summary.csv and a printed table.
ComparisonReport cmd_compare(const RunSpec& spec, std::ostream& log);

struct SequenceSpec {
  std::size_t n = 2;
  double nu = 1.0;
  std::size_t horizon = 10;  // T
  double r0 = 1.0;
};

/// Writes t,a_t,envelope and one slack column per lemma; returns the worst
/// slack (including the contraction-factor bracket).
double cmd_sequence(const SequenceSpec& spec, std::ostream& csv);

inline constexpr double kLemmaSlack = -1e-12;

struct NamedSystem {
  std::string name;
  std::shared_ptr<const ResidualSystem> system;
};

struct SelftestOptions {
  std::size_t seeds = 5;
  std::uint64_t base_seed = 1;
  /// Checked for gradient fidelity alongside the shipped problems.
  std::vector<NamedSystem> extra_systems;
};

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelftestReport {
  std::vector<SelftestCheck> checks;
  double seconds = 0.0;
  bool passed() const;
};

SelftestReport cmd_selftest(const SelftestOptions& options, std::ostream& log);

}  // namespace ign::bench
